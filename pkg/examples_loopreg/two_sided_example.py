#!/usr/bin/env python

""" Example use of the two-sided Gaussian regulator exp(-delta p^2 -
    delta/p^2), which makes every integral finite at both ends.

    For a massless propagator the regulated integral is a modified Bessel
    function; for a massive one the delta-free part of its small-delta
    series is the dimensionally regularized value.
"""
import math

import loopreg
from loopreg import Params, SchemeSpec
from loopreg import schemes


s = SchemeSpec('two_sided_gaussian', delta=0.5)
for alpha in (0.7, 1.0, 1.8):
    p = Params(d=3, alpha=alpha, m2=0)
    print("alpha = {0}: quadrature {1:.12f}, Bessel form {2:.12f}".format(
        alpha, schemes.two_sided_eval(p, s).value,
        schemes.two_sided_massless_closed_form(p, s).value))

p = Params(d=3, alpha=1, m2=1)
for delta in (1e-2, 1e-3, 1e-4):
    s = SchemeSpec('two_sided_gaussian', delta=delta)
    expansion = schemes.two_sided_series(p, s)
    extracted = loopreg.eval_at(loopreg.extract_scale(expansion, 'delta'))
    print("delta = {0:g}: value {1:.8f}, extracted {2:.12f}".format(
        delta, schemes.two_sided_eval(p, s).value, extracted))
print("-1/(4 pi) = {0:.12f}".format(-1 / (4 * math.pi)))
