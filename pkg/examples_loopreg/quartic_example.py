#!/usr/bin/env python

""" Example of a regulator that is not equivalent to dimensional
    regularization:

    Adding a x^4 to the denominator of x^2/(x^2 + 1) makes the radial
    integral converge for every a > 0, but the limit a -> 0 does not
    produce the continued value -pi/2; the regulated value grows like
    pi/(2 sqrt(a)) instead.  The Mellin regulator fails for alpha <= 0.
"""
import loopreg
from loopreg import Params, SchemeSpec
from loopreg.schemes import demo_continuation_target


p = Params(d=3, alpha=1)
print("continued value: {0:.12f}".format(demo_continuation_target(p)))
for a in (1e-2, 1e-4, 1e-6):
    value = loopreg.incomplete_demo('quartic', p,
                                    SchemeSpec('quartic_demo', a=a)).value
    print("\ta = {0:g}: {1:.6f}".format(a, value))

try:
    loopreg.incomplete_demo('mellin', Params(d=3, alpha=-1),
                            SchemeSpec('mellin_demo', z=0.1))
except loopreg.DivergentInput as e:
    print("\nMellin regulator at alpha = -1:", e)
