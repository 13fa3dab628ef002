#!/usr/bin/env python

""" Example use of the cut-off regulator:

    The integral int d^3p/(2 pi)^3 (p^2 + 1)^(-2) converges and equals
    1/(8 pi).  Cutting the momentum off at K gives a value that approaches
    it like 1/K.

    The integral with alpha = 1 diverges linearly.  Its cut-off value grows
    like K, but the K-free part of the large-K series is still the
    dimensionally regularized value -1/(4 pi).
"""
import numpy as np

import loopreg
from loopreg import Params, SchemeSpec


p = Params(d=3, alpha=2, m2=1)
master = loopreg.master_one_loop(p).value

print("alpha = 2: I = {0:.12f}".format(master))
for K in np.geomspace(10, 1e4, 4):
    value = loopreg.cutoff_eval(p, SchemeSpec('cutoff_uv', K=K)).value
    print("\tK = {0:8.0f}: cut-off {1:.12f}, K * gap = {2:.6f}"
          .format(K, value, K * (value - master)))

p = Params(d=3, alpha=1, m2=1)
s = SchemeSpec('cutoff_uv', K=1e3)
expansion = loopreg.cutoff_series(p, s)
extracted = loopreg.eval_at(loopreg.extract_scale(expansion, 'K'))

print()
print("alpha = 1, K = 1e3:")
print("\tcut-off value       ", loopreg.cutoff_eval(p, s).value)
print("\tseries at K         ", loopreg.eval_at(expansion, {'K': 1e3}))
print("\textracted           ", extracted)
print("\t-1/(4 pi)           ", -1 / (4 * np.pi))
