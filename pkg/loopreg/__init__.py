"""
# loopreg: regulated one-loop integrals and their dimensionally
# regularized content.

License: BSD-style (see LICENSE.txt in main source directory)

Evaluates the one-loop master integral

    I(d, alpha, m2) = int d^d p/(2 pi)^d (p^2 + m2)^(-alpha)

in dimensional regularization and under a family of explicit regulators
(sharp cut-offs, Gaussian damping, infrared windows, two-sided Gaussian
damping), and shows how the dimensionally regularized value is recovered
from each regulated one.


## Usage:

Describe the integral with a `Params` record and the regulator with a
`SchemeSpec`:

    >>> from loopreg import Params, SchemeSpec, cutoff_eval, cutoff_series
    >>> p = Params(d=3, alpha=1, m2=1)
    >>> s = SchemeSpec('cutoff_uv', K=1e4)

`cutoff_eval(p, s)` returns the regulated value, `cutoff_series(p, s)` its
large-K expansion as a `FormalSeries` whose terms are tagged by symbolic
powers of K.  The extraction operator `extract_scale` (or `extract_multi`
for several scales) keeps the scale-free part of such a series, which is
the dimensionally regularized value returned by `master_one_loop(p)`.

Every numeric result carries an absolute error estimate.  The quadrature
`oracle` evaluates the defining integral of any family by brute force and
is what the closed forms and series are checked against.


## Regulators:

The cut-off and Gaussian regulators work for every real alpha.  Two
further regulators (a monomial Mellin regulator and a quartic denominator)
are included as demonstrations of schemes that do not: `incomplete_demo`
raises DivergentInput for alpha <= 0.


## Command line:

`loopreg eval|series|extract|verify|grid` (see `loopreg.cli`).
"""

import warnings
import re

# Make sure that DeprecationWarning within this package always gets printed
warnings.filterwarnings('always', category=DeprecationWarning,
                        module=r'^{0}\.'.format(re.escape(__name__)))


from .utils import (LoopRegError, PoleError, NonConvergence, DomainError,
                    DivergentInput, RecurrenceViolation)
from .base import Params, SchemeSpec, EvalResult, BaseRegulator
from .dimreg import (classify, master_one_loop, veltman_scaleless,
                     lower_index, two_mass_master, two_mass_series)
from .series import (FormalSeries, Term, SymbolicExponent, normalize,
                     extract_scale, extract_multi, eval_at,
                     commutes_with_mass_derivative)
from .schemes import (regulator_for, cutoff_eval, cutoff_series,
                      gaussian_eval, gaussian_series, two_mass_cutoff,
                      two_mass_gaussian, ir_window_eval, gaussian_ir_eval,
                      two_sided_eval, separate_cutoff_eval, incomplete_demo)


__all__ = ['LoopRegError',
           'PoleError',
           'NonConvergence',
           'DomainError',
           'DivergentInput',
           'RecurrenceViolation',
           'Params',
           'SchemeSpec',
           'EvalResult',
           'BaseRegulator',
           'classify',
           'master_one_loop',
           'veltman_scaleless',
           'lower_index',
           'two_mass_master',
           'two_mass_series',
           'FormalSeries',
           'Term',
           'SymbolicExponent',
           'normalize',
           'extract_scale',
           'extract_multi',
           'eval_at',
           'commutes_with_mass_derivative',
           'regulator_for',
           'cutoff_eval',
           'cutoff_series',
           'gaussian_eval',
           'gaussian_series',
           'two_mass_cutoff',
           'two_mass_gaussian',
           'ir_window_eval',
           'gaussian_ir_eval',
           'two_sided_eval',
           'separate_cutoff_eval',
           'incomplete_demo',
           'specfun',
           'oracle']

# PEP0440 compatible formatted version, see:
# https://www.python.org/dev/peps/pep-0440/
#
# Dev branch marker is: 'X.Y.dev' or 'X.Y.devN' where N is an integer.
#
__version__ = '0.1.0'
