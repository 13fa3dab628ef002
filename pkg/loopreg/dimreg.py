"""
Dimensionally regularized one-loop integrals.

The master integral

    I(d, alpha, m2) = int d^d p/(2 pi)^d (p^2 + m2)^(-alpha)
                    = (m2)^(d/2 - alpha) / (4 pi)^(d/2)
                      * Gamma(alpha - d/2) / Gamma(alpha)

is defined by the right-hand side for every (d, alpha) off the countable set
where alpha - d/2 is a non-positive integer.  This module classifies
parameter points, evaluates the master formula and its two-mass
generalization, and checks the index-lowering recurrence

    alpha * I(alpha + 1) = -d I(alpha) / d m2.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import math
from dataclasses import dataclass

import numpy as np

from loopreg import oracle, specfun
from loopreg.base import EvalResult, DEFAULT_N_MAX, TRUNCATION_LIMIT
from loopreg.utils import (DomainError, NonConvergence, PoleError,
                           RecurrenceViolation, POLE_TOLERANCE, binomial,
                           check_pole, pole_distance, relative_residual)


__all__ = ['VERDICTS',
           'DomainVerdict',
           'classify',
           'master_one_loop',
           'veltman_scaleless',
           'lower_index',
           'two_mass_master',
           'two_mass_series',
           'log_case_radial',
           'epsilon_log_identity',
           'two_mass_lower_piece']


VERDICTS = ('convergent', 'continued', 'pole', 'unsupported')

# Relative step and tolerance of the finite-difference recurrence check.
FD_STEP = 1e-5
FD_RTOL = 1e-6

_EPS = np.finfo(float).eps

_POLE_HINT = ('evaluate at d - 2*eps for a small user-chosen eps instead '
              '(the integer case carries logarithms)')


@dataclass(frozen=True)
class DomainVerdict:
    kind: str
    reason: str

    def __post_init__(self):
        if self.kind not in VERDICTS:
            raise ValueError('verdict {0!r} not understood'.format(self.kind))


def classify(p):
    """Classify a parameter point.

    Returns
    -------
    DomainVerdict
        'unsupported' for d <= 0; 'pole' if alpha - d/2 (alpha + beta - d/2
        with a second propagator) is within POLE_TOLERANCE of a non-positive
        integer; 'convergent' if the unregulated integral converges
        (2*power - d > 0); 'continued' otherwise.

    Examples
    --------
    >>> from loopreg.base import Params
    >>> classify(Params(d=3, alpha=2)).kind
    'convergent'
    >>> classify(Params(d=4, alpha=2)).kind
    'pole'
    """
    d = p.d
    if not (math.isfinite(d) and d > 0):
        return DomainVerdict('unsupported', 'dimension d = {0!r} is not '
                             'positive'.format(d))
    power = p.total_power
    index = power - 0.5 * d
    location, distance = pole_distance(index)
    if distance < POLE_TOLERANCE:
        return DomainVerdict('pole', 'power - d/2 = {0!r} is at the gamma '
                             'pole {1:g}'.format(index, location))
    if 2 * power - d > 0:
        return DomainVerdict('convergent', '2*power - d = {0!r} > 0'
                             .format(2 * power - d))
    return DomainVerdict('continued', 'UV divergent radial integral, defined '
                         'by analytic continuation in d')


def _require_regular(p):
    verdict = classify(p)
    if verdict.kind == 'pole':
        index = p.total_power - 0.5 * p.d
        location, distance = pole_distance(index)
        raise PoleError('master integral', location, distance,
                        hint=_POLE_HINT)
    if verdict.kind == 'unsupported':
        raise DomainError(verdict.reason)
    return verdict


def master_one_loop(p):
    """The one-loop master integral I(d, alpha, m2).

    Parameters
    ----------
    p : Params
        Single-propagator parameters with m2 > 0.

    Returns
    -------
    EvalResult
        Closed form with the gamma-function error bars propagated.

    Examples
    --------
    >>> from loopreg.base import Params
    >>> round(master_one_loop(Params(d=3, alpha=2, m2=1)).value * 8 * math.pi, 12)
    1.0
    """
    if p.two_mass:
        raise DomainError('master_one_loop takes a single propagator; use '
                          'two_mass_master')
    _require_regular(p)
    if not p.m2 > 0:
        raise DomainError('master_one_loop needs m2 > 0; use '
                          'veltman_scaleless for the massless integral')
    d, alpha, m2 = p.d, p.alpha, p.m2
    g = specfun.gamma(alpha - 0.5 * d)
    r = specfun.rgamma(alpha)
    prefactor = m2 ** (0.5 * d - alpha) / (4 * math.pi) ** (0.5 * d)
    value = prefactor * g.value * r.value
    err = abs(prefactor) * (g.abs_err * abs(r.value)
                            + abs(g.value) * r.abs_err)
    return EvalResult(value, err, 'closed_form')


def veltman_scaleless(d, alpha):
    """Scaleless integral int d^d p (p^2)^(-alpha), which is assigned the
    value zero for every d and alpha."""
    return EvalResult(0.0, 0.0, 'closed_form', note='Veltman/Hadamard')


def lower_index(p, step=FD_STEP, rtol=FD_RTOL):
    """alpha * I(alpha + 1), checked against the central difference
    -[I(m2 + h) - I(m2 - h)]/(2h) with h = step*m2.

    Raises
    ------
    PoleError
        If (d, alpha) or (d, alpha + 1) sits on a pole.
    RecurrenceViolation
        If the finite-difference check fails.
    """
    _require_regular(p)
    raised = p.replace(alpha=p.alpha + 1)
    _require_regular(raised)
    value = p.alpha * master_one_loop(raised).value
    h = step * p.m2
    upper = master_one_loop(p.replace(m2=p.m2 + h)).value
    lower = master_one_loop(p.replace(m2=p.m2 - h)).value
    derivative = -(upper - lower) / (2 * h)
    residual = relative_residual(derivative, value, floor=1e-300)
    if residual > rtol:
        raise RecurrenceViolation(
            'alpha*I(alpha+1) = {0!r} but -dI/dm2 = {1!r} (relative residual '
            '{2:.3g})'.format(value, derivative, residual))
    return EvalResult(value, abs(value) * rtol, 'closed_form',
                      note='finite-difference residual {0:.3g}'
                      .format(residual))


def _require_two_mass(p):
    if not p.two_mass:
        raise DomainError('two-mass operation needs beta != 0')
    if p.M2 is None:
        raise DomainError('two-mass operation needs M2')
    if not p.M2 >= p.m2 > 0:
        raise DomainError('two-mass operations need M2 >= m2 > 0; swap '
                          '(alpha, m2) with (beta, M2)')
    _require_regular(p)


def two_mass_master(p):
    """I(d, alpha, beta, m2, M2) in its 2F1 form

        Gamma(alpha+beta-d/2) (M2)^(d/2-alpha-beta)
        / ((4 pi)^(d/2) Gamma(alpha+beta))
        * 2F1(alpha+beta-d/2, alpha; alpha+beta; 1 - m2/M2).
    """
    _require_two_mass(p)
    d, a, b = p.d, p.alpha, p.beta
    s = a + b
    g = specfun.gamma(s - 0.5 * d)
    r = specfun.rgamma(s)
    f = specfun.hyp2f1(s - 0.5 * d, a, s, 1.0 - p.m2 / p.M2)
    prefactor = (g.value * r.value * p.M2 ** (0.5 * d - s)
                 / (4 * math.pi) ** (0.5 * d))
    value = prefactor * f.value
    err = (abs(prefactor) * f.abs_err
           + abs(value) * (g.abs_err / abs(g.value) + 8 * _EPS))
    return EvalResult(value, err, 'closed_form')


def two_mass_lower_piece(p, power_shift=0):
    """int_0^1 w^(d/2+j-1) (M2 w + m2)^(-alpha) (w + 1)^(-beta) dw."""
    d, a, b, m2, M2 = p.d, p.alpha, p.beta, p.m2, p.M2
    e = 0.5 * d + power_shift - 1

    def f(w):
        return w ** e * (M2 * w + m2) ** (-a) * (w + 1) ** (-b)

    return oracle.integrate(f, 0.0, 1.0, rel_tol=1e-12, abs_tol=1e-300)


def two_mass_series(p, n_max=DEFAULT_N_MAX):
    """Two-mass master integral from its split form: the momentum range is
    cut at p^2 = M2, the lower part integrated numerically and the upper
    part expanded in m2/M2 and 1/w,

        N M^(d-2beta) int_0^1 w^(d/2-1) (M2 w + m2)^(-alpha) (w+1)^(-beta) dw
        + N M^(d-2alpha-2beta) sum_n C(-alpha,n) (m2/M2)^n
              sum_k C(-beta,k) / (alpha+beta-d/2+n+k),

    with N = 1/((4 pi)^(d/2) Gamma(d/2)).  The k sum is Euler-summed; for
    equal masses both expansions merge into one sum over C(-alpha-beta, n).
    """
    if not p.two_mass:
        return master_one_loop(p)
    _require_two_mass(p)
    if n_max < 1:
        raise DomainError('n_max must be at least 1')
    d, a, b, m2, M2 = p.d, p.alpha, p.beta, p.m2, p.M2
    index = a + b - 0.5 * d
    norm = 0.5 * oracle.radial_measure(d)
    M = math.sqrt(M2)
    lower = two_mass_lower_piece(p)
    head = norm * M ** (d - 2 * b) * lower.value
    tail_prefactor = norm * M ** (d - 2 * a - 2 * b)

    if m2 == M2:
        tail = specfun.binomial_reciprocal_sum(a + b, index)
        total = head + tail_prefactor * tail.value
        err = (norm * M ** (d - 2 * b) * lower.err_est
               + abs(tail_prefactor) * tail.abs_err)
        return EvalResult(total, err, 'series')

    ratio = m2 / M2
    tail = 0.0
    err = 0.0
    term = 0.0
    for n in range(n_max + 1):
        check_pole('two_mass_series', index + n, hint=_POLE_HINT)
        inner = specfun.binomial_reciprocal_sum(b, index + n)
        weight = binomial(-a, n) * ratio ** n
        term = weight * inner.value
        tail += term
        err += abs(weight) * inner.abs_err
    total = head + tail_prefactor * tail
    if abs(term) > TRUNCATION_LIMIT * abs(tail) and tail != 0:
        raise NonConvergence('two_mass_series: tail terms do not decay '
                             '(m2/M2 = {0:.3g})'.format(ratio))
    err = (norm * M ** (d - 2 * b) * lower.err_est
           + abs(tail_prefactor) * (err + abs(term)))
    return EvalResult(total, err, 'series')


def log_case_radial(x):
    """The d = 4, alpha = 2 cut-off radial integral

        int_0^K 2 p^3/(p^2+m2)^2 dp = ln(1 + x) - x/(1 + x),  x = K^2/m2,

    and its large-x form ln(x) - 1.

    Returns
    -------
    exact, asymptote : floats
    """
    if not x > 0:
        raise DomainError('log_case_radial needs K^2/m2 > 0')
    return math.log1p(x) - x / (1 + x), math.log(x) - 1.0


def epsilon_log_identity(x, eps):
    """(x^eps - 1)/eps, which tends to ln(x) as eps -> 0; the way a
    logarithm ln(K^2/m2) hides inside K^(2 eps) - m^(2 eps)."""
    if eps == 0:
        raise DomainError('eps must be nonzero')
    return math.expm1(eps * math.log(x)) / eps


def _test():
    import doctest
    doctest.testmod()

if __name__ == "__main__":
    _test()
