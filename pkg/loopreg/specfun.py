"""
Real-argument special functions with the analytic continuations needed by
the closed forms of the regulated integrals.

Every function returns a :class:`SpecValue` carrying an absolute error
estimate and the method used.  Power series stop when the last term drops
below SERIES_RTOL of the partial sum; integral representations are
evaluated with the quadrature oracle of :mod:`loopreg.oracle`.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from loopreg import oracle
from loopreg.utils import (DomainError, DivergentInput, NonConvergence,
                           PoleError, MAX_TERMS, Z_MARGIN, check_pole,
                           is_near_integer, sum_series)


__all__ = ['METHODS',
           'SpecValue',
           'gamma',
           'rgamma',
           'pochhammer',
           'beta_series',
           'binomial_reciprocal_sum',
           'hyp2f1',
           'hyp1f1',
           'tricomi_u',
           'expint',
           'bessel_k',
           'appell_f1']


METHODS = ('series', 'integral-representation', 'recurrence', 'reflection',
           'closed-form')

_EPS = np.finfo(float).eps

# Relative tolerance requested from the oracle for integral representations,
# and the error estimate still accepted when QUADPACK stops on roundoff
# before reaching it.
_QUAD_RTOL = 1e-13
_QUAD_ACCEPT_RTOL = 1e-10
_QUAD_ATOL = 1e-300

# 2F1 power series is used for z in [_SERIES_LO, _SERIES_HI]; Pfaff maps
# (-1, _SERIES_LO) into (1/3, 1/2).
_SERIES_LO = -0.5
_SERIES_HI = 0.9

# U(a, b, z) uses the 1F1 connection formula only if b is at least this far
# from an integer and the result keeps this relative accuracy.
_CONNECTION_MARGIN = 1e-3
_CONNECTION_RTOL = 1e-10


@dataclass(frozen=True)
class SpecValue:
    """Value of a special function with its estimated absolute error."""
    value: float
    abs_err: float
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError('method {0!r} not understood'.format(self.method))
        if math.isfinite(self.value) and not (
                self.abs_err >= 0 and math.isfinite(self.abs_err)):
            raise ValueError('abs_err must be finite and non-negative')

    def __float__(self):
        return float(self.value)


def _quad(f, lower, upper=np.inf, **kwargs):
    """Quadrature judged by its error estimate alone: QUADPACK's roundoff
    status is not a failure while err_est <= _QUAD_ACCEPT_RTOL*|value|."""
    kwargs.setdefault('rel_tol', _QUAD_RTOL)
    kwargs.setdefault('abs_tol', _QUAD_ATOL)
    res = oracle.integrate(f, lower, upper, strict=False, **kwargs)
    if res.converged:
        return res
    if not (math.isfinite(res.value) and math.isfinite(res.err_est)
            and res.err_est <= max(_QUAD_ATOL,
                                   _QUAD_ACCEPT_RTOL * abs(res.value))):
        raise NonConvergence('integral representation did not converge: '
                             'value {0:.6g}, error estimate {1:.3g}'
                             .format(res.value, res.err_est))
    return res


def _log_points(y):
    """Breakpoints 1/y, 10/y, ... below 1 for an integrand on [0, 1] with
    a knee at t ~ 1/y."""
    if y <= 1:
        return ()
    n = int(math.floor(math.log10(y)))
    return tuple(10.0 ** k / y for k in range(n + 1) if 10.0 ** k / y < 1)


def gamma(x):
    """Euler gamma function.

    Parameters
    ----------
    x : float
        Any real number off the non-positive integers.

    Returns
    -------
    SpecValue
        Relative error below 1e-12 for |x| <= 50.

    Examples
    --------
    >>> gamma(5).value
    24.0
    """
    check_pole('gamma', x)
    value = float(special.gamma(x))
    if not math.isfinite(value):
        raise DomainError('gamma({0!r}) overflows'.format(x))
    # Accuracy degrades like eps/distance next to a pole.
    amplification = 1.0
    if x < 0.5:
        amplification += 1.0 / max(abs(x - round(x)), _EPS)
    rel = 8 * _EPS * (1.0 + abs(x)) * amplification
    return SpecValue(value, rel * abs(value),
                     'reflection' if x < 0.5 else 'closed-form')


def rgamma(x):
    """Reciprocal gamma function 1/Gamma(x), entire: exactly zero at the
    non-positive integers."""
    value = float(special.rgamma(x))
    return SpecValue(value, 8 * _EPS * (1.0 + abs(x)) * abs(value),
                     'reflection' if x < 0.5 else 'closed-form')


def pochhammer(x, n):
    """Rising factorial (x)_n = x (x+1) ... (x+n-1).

    >>> pochhammer(1, 4)
    24.0
    >>> pochhammer(-0.5, 2)
    -0.25
    """
    return float(np.prod(x + np.arange(n, dtype=float)))


def binomial_reciprocal_sum(s, x, n_terms=MAX_TERMS):
    """The sum over n of C(-s, n)/(x + n), Euler-summed.

    The raw series sits on the boundary of its disc of convergence (it is
    the expansion of (1 + t)^(-s) at t = 1 integrated against t^(x-1)), so
    it converges slowly or not at all.  Its Euler transform

        2^(-s)/x * sum_n (s)_n / (x+1)_n * 2^(-n)

    converges geometrically and continues the sum to every x off the
    non-positive integers.

    Parameters
    ----------
    s, x : float
    n_terms : int
        Maximum number of terms of the transformed series.

    Returns
    -------
    SpecValue
    """
    check_pole('binomial_reciprocal_sum', x)
    if n_terms < 1:
        raise DomainError('n_terms must be at least 1')
    first = 2.0 ** (-s) / x
    term = first
    total = first
    magnitude = abs(first)
    previous = math.inf
    n = 0
    while term != 0.0 and abs(term) >= 1e-17 * abs(total):
        if n + 1 >= n_terms:
            if abs(term) >= previous:
                raise NonConvergence(
                    'binomial_reciprocal_sum: terms still growing after {0} '
                    'terms'.format(n_terms))
            break
        previous = abs(term)
        term *= 0.5 * (s + n) / (x + 1 + n)
        n += 1
        total += term
        magnitude += abs(term)
    return SpecValue(total, 2 * abs(term) + 4 * _EPS * magnitude, 'series')


def beta_series(x, y, n_terms=MAX_TERMS):
    """Euler beta function B(x, y) from its binomial series

        B(x, y) = sum_n C(-(x+y), n) [1/(x+n) + 1/(y+n)],

    each half summed with :func:`binomial_reciprocal_sum`.  The result is
    symmetric in (x, y) bit for bit.

    Examples
    --------
    >>> abs(beta_series(0.5, 0.5).value - math.pi) < 1e-12
    True
    """
    check_pole('beta_series', x)
    check_pole('beta_series', y)
    s = x + y
    left = binomial_reciprocal_sum(s, x, n_terms)
    right = binomial_reciprocal_sum(s, y, n_terms)
    return SpecValue(left.value + right.value, left.abs_err + right.abs_err,
                     'series')


def _hyp2f1_series(a, b, c, z):
    total, err = sum_series(
        1.0, lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)) * z, 'hyp2f1')
    return SpecValue(total, err, 'series')


def _hyp2f1_euler(a, b, c, z):
    """Euler integral with b as the integration parameter, c > b > 0."""
    prefactor = (gamma(c).value * rgamma(b).value * rgamma(c - b).value)

    def f(t):
        return t ** (b - 1) * (1 - t) ** (c - b - 1) * (1 - z * t) ** (-a)

    res = _quad(f, 0.0, 1.0, points=_log_points(abs(z)))
    value = prefactor * res.value
    return SpecValue(value, abs(prefactor) * res.err_est
                     + 16 * _EPS * abs(value), 'integral-representation')


def _hyp2f1_inverse(a, b, c, z):
    """Connection formula onto 1/z, for z < -1 and a - b off the integers."""
    w = 1.0 / z
    t1 = (gamma(c).value * gamma(b - a).value * rgamma(b).value
          * rgamma(c - a).value * (-z) ** (-a)
          * _hyp2f1_series(a, a - c + 1, a - b + 1, w).value)
    t2 = (gamma(c).value * gamma(a - b).value * rgamma(a).value
          * rgamma(c - b).value * (-z) ** (-b)
          * _hyp2f1_series(b, b - c + 1, b - a + 1, w).value)
    value = t1 + t2
    return SpecValue(value, 64 * _EPS * (abs(t1) + abs(t2)), 'series')


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real arguments.

    Parameters
    ----------
    a, b, c : float
        c must be off the non-positive integers.
    z : float
        z <= 1 - Z_MARGIN. Large negative z is allowed.

    Notes
    -----
    - terminating (a or b a non-positive integer): finite sum, any z;
    - -0.5 <= z <= 0.9: power series;
    - -1 < z < -0.5: Pfaff transformation onto z/(z-1), then power series;
    - otherwise: Euler integral with whichever of a, b lies in (0, c),
      falling back to the power series (z > 0.9) or the 1/z connection
      formula (z <= -1).

    Examples
    --------
    >>> hyp2f1(2, 2, 3, 0).value
    1.0
    """
    check_pole('hyp2f1', c)
    if z > 1 - Z_MARGIN:
        raise DomainError('hyp2f1 needs z <= 1 - {0:g}, got {1!r}'
                          .format(Z_MARGIN, z))
    # Sorting makes the result exactly symmetric in (a, b).
    a, b = sorted((float(a), float(b)))
    if z == 0:
        return SpecValue(1.0, 0.0, 'series')

    terminating = any(x <= 0 and is_near_integer(x, 1e-14) for x in (a, b))
    if terminating or _SERIES_LO <= z <= _SERIES_HI:
        return _hyp2f1_series(a, b, c, z)
    if -1 < z < _SERIES_LO:
        w = z / (z - 1)
        factor = (1 - z) ** (-b)
        inner = _hyp2f1_series(b, c - a, c, w)
        return SpecValue(factor * inner.value, factor * inner.abs_err,
                         'series')

    for x, y in ((b, a), (a, b)):
        if 0 < x < c:
            return _hyp2f1_euler(y, x, c, z)
    if z > 0:
        return _hyp2f1_series(a, b, c, z)
    if not is_near_integer(a - b, 1e-6):
        return _hyp2f1_inverse(a, b, c, z)
    raise NonConvergence('hyp2f1: no admissible representation for '
                         '(a, b, c, z) = ({0}, {1}, {2}, {3})'
                         .format(a, b, c, z))


def hyp1f1(a, b, z):
    """Kummer confluent hypergeometric function 1F1(a; b; z) from its power
    series.
    """
    check_pole('hyp1f1', b)
    total, err = sum_series(
        1.0, lambda n: (a + n) / ((b + n) * (n + 1)) * z, 'hyp1f1')
    return SpecValue(total, err, 'series')


def _tricomi_integral(a, b, z):
    def f(t):
        return math.exp(-z * t) * t ** (a - 1) * (1 + t) ** (b - a - 1)

    res = _quad(f, 0.0, decay='exponential', scale=1.0 / z)
    r = rgamma(a).value
    value = r * res.value
    return SpecValue(value, abs(r) * res.err_est + 16 * _EPS * abs(value),
                     'integral-representation')


def tricomi_u(a, b, z):
    """Confluent hypergeometric function of the second kind U(a, b, z).

    Computed from the connection formula

        U(a,b,z) = Gamma(1-b)/Gamma(a+1-b) 1F1(a; b; z)
                   + Gamma(b-1)/Gamma(a) z^(1-b) 1F1(a+1-b; 2-b; z),

    with both 1F1 from their power series.  The formula degenerates at
    integer b and cancels badly for large z; there, and whenever its error
    estimate exceeds 1e-10 relative, the integral representation

        U(a,b,z) = 1/Gamma(a) int_0^inf e^(-zt) t^(a-1) (1+t)^(b-a-1) dt

    is used instead (it needs a > 0).

    Examples
    --------
    >>> abs(tricomi_u(1, 2, 3).value - 1.0 / 3) < 1e-12
    True
    """
    if not z > 0:
        raise DomainError('tricomi_u needs z > 0')
    if not is_near_integer(b, _CONNECTION_MARGIN):
        t1 = (gamma(1 - b).value * rgamma(a + 1 - b).value
              * hyp1f1(a, b, z).value)
        m2 = hyp1f1(a + 1 - b, 2 - b, z)
        c2 = gamma(b - 1).value * rgamma(a).value * z ** (1 - b)
        t2 = c2 * m2.value
        value = t1 + t2
        err = (64 * _EPS * (abs(t1) + abs(t2)) + abs(c2) * m2.abs_err)
        if err <= _CONNECTION_RTOL * abs(value):
            return SpecValue(value, err, 'series')
        if not a > 0:
            return SpecValue(value, err, 'series')
        warnings.warn('tricomi_u: connection formula lost accuracy at '
                      '(a, b, z) = ({0}, {1}, {2}); using the integral '
                      'representation'.format(a, b, z), RuntimeWarning)
    elif not a > 0:
        raise PoleError('tricomi_u', round(b), abs(b - round(b)),
                        hint='integer b needs a > 0 for the integral form')
    return _tricomi_integral(a, b, z)


def expint(omega, x):
    """Generalized exponential integral E_omega(x) = int_1^inf e^(-xt)
    t^(-omega) dt for real order.

    Examples
    --------
    >>> expint(3.5, 0).value
    0.4
    """
    if x == 0:
        if omega > 1:
            return SpecValue(1.0 / (omega - 1), 0.0, 'closed-form')
        raise DivergentInput('E_omega(0) diverges for omega <= 1')
    if not x > 0:
        raise DomainError('expint needs x >= 0')
    res = _quad(lambda t: math.exp(-x * t) * t ** (-omega), 1.0,
                decay='exponential', scale=1.0 / x)
    return SpecValue(res.value, res.err_est, 'integral-representation')


def bessel_k(nu, x):
    """Modified Bessel function of the second kind from

        K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.

    Only |nu| enters, so K_nu and K_-nu agree bit for bit.  The integrand
    is below exp(-800) beyond t = acosh(1 + 800/x), where the range is cut.
    """
    if not x > 0:
        raise DomainError('bessel_k needs x > 0')
    nu = abs(float(nu))
    upper = math.acosh(1.0 + (800.0 + 20.0 * nu) / x)
    res = _quad(lambda t: math.exp(-x * math.cosh(t)) * math.cosh(nu * t),
                0.0, upper, points=(min(math.log(2.0 / x), upper / 2),)
                if x < 2 else ())
    return SpecValue(res.value, res.err_est, 'integral-representation')


def appell_f1(a, b1, b2, c, v, w):
    """Appell's first hypergeometric function F1(a; b1, b2; c; v, w) from
    its Euler-type integral

        Gamma(c)/(Gamma(a) Gamma(c-a))
            int_0^1 x^(a-1) (1-x)^(c-a-1) (1-xv)^(-b1) (1-xw)^(-b2) dx,

    valid for c > a > 0 and v, w < 1.
    """
    if not (a > 0 and c - a > 0):
        raise DomainError('appell_f1 integral needs c > a > 0')
    if not (v < 1 and w < 1):
        raise DomainError('appell_f1 needs v, w < 1')
    prefactor = gamma(c).value * rgamma(a).value * rgamma(c - a).value

    def f(x):
        return (x ** (a - 1) * (1 - x) ** (c - a - 1)
                * (1 - x * v) ** (-b1) * (1 - x * w) ** (-b2))

    points = tuple(sorted(set(_log_points(abs(v)) + _log_points(abs(w)))))
    res = _quad(f, 0.0, 1.0, points=points)
    value = prefactor * res.value
    return SpecValue(value, abs(prefactor) * res.err_est
                     + 16 * _EPS * abs(value), 'integral-representation')


def _test():
    import doctest
    doctest.testmod()

if __name__ == "__main__":
    _test()
