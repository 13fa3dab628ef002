"""
Brute-force adaptive quadrature: the numeric ground truth every closed form
and series of the package is checked against.

Finite intervals go straight to QUADPACK (``scipy.integrate.quad``), whose
Gauss-Kronrod 10/21-point pair supplies the embedded error estimate and
never evaluates the integrand at an endpoint.  Semi-infinite intervals are
first mapped onto a finite one:

- ``power``:        p = a + s*x/(1-x),                      x in (0, 1)
- ``exponential``:  p = a + s*exp(t - exp(-t)),             t in (-4, 6.6)
- ``gaussian``:     p = a + s*exp(pi/2*sinh(t)),            t in (-4, 3)

The double-exponential maps are cut where the mapped integrand is below
exp(-700) relative to any polynomially bounded prefactor.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np
from scipy import integrate as quadpack

from loopreg import specfun
from loopreg.utils import DomainError, NonConvergence


__all__ = ['DECAY_HINTS',
           'DEFAULT_RTOL',
           'DEFAULT_ATOL',
           'MAX_SUBDIVISIONS',
           'QuadratureRequest',
           'QuadratureResult',
           'integrate_request',
           'integrate',
           'radial_measure',
           'radial_integrand',
           'scheme_oracle']


DECAY_HINTS = ('power', 'exponential', 'gaussian')

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-14
MAX_SUBDIVISIONS = 10000

# Tolerances below this are raised to it; QUADPACK cannot deliver more.
_ROUNDOFF = 50 * np.finfo(float).eps

_EXP_RANGE = (-4.0, 6.6)
_GAUSS_RANGE = (-4.0, 3.0)


@dataclass(frozen=True)
class QuadratureRequest:
    """One integral to evaluate.

    Parameters
    ----------
    integrand : callable
        Pure real function of one real variable, finite on the open domain.
    lower, upper : float
        Domain. ``upper = np.inf`` selects a semi-infinite domain, which
        then needs `decay`.
    decay : str or None
        One of 'power', 'exponential', 'gaussian'; how the integrand decays
        at infinity.
    scale : float (default 1.0)
        Characteristic length of the integrand beyond `lower` (the decay
        length for 'exponential', 1/sqrt(rate) for 'gaussian').
    points : tuple of floats
        Interior breakpoints where the integrand changes character.
    """
    integrand: Callable[[float], float]
    lower: float
    upper: float = np.inf
    decay: str = None
    rel_tol: float = DEFAULT_RTOL
    abs_tol: float = DEFAULT_ATOL
    max_subdivisions: int = MAX_SUBDIVISIONS
    scale: float = 1.0
    points: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not math.isfinite(self.lower):
            raise DomainError('lower limit must be finite')
        if math.isinf(self.upper):
            if self.decay not in DECAY_HINTS:
                raise DomainError('semi-infinite domain needs a decay hint '
                                  'in {0}'.format(DECAY_HINTS))
        elif not self.lower < self.upper:
            raise DomainError('empty domain [{0}, {1}]'
                              .format(self.lower, self.upper))
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError('tolerances must be positive')
        if not self.scale > 0:
            raise DomainError('scale must be positive')
        if self.max_subdivisions < 1:
            raise DomainError('max_subdivisions must be at least 1')
        object.__setattr__(self, 'rel_tol', max(self.rel_tol, _ROUNDOFF))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    err_est: float
    subdivisions_used: int
    converged: bool


def _finite_form(req):
    """Return (g, lo, hi, points) with the integral of g over [lo, hi]
    equal to the requested one."""
    f, a, s = req.integrand, req.lower, req.scale
    if math.isfinite(req.upper):
        return f, a, req.upper, req.points

    if req.decay == 'power':
        def g(x):
            one_minus = 1.0 - x
            return f(a + s * x / one_minus) * s / (one_minus * one_minus)
        pts = tuple((p - a) / (s + p - a) for p in req.points if p > a)
        return g, 0.0, 1.0, pts

    if req.decay == 'exponential':
        def phi(t):
            e = math.exp(-t)
            u = math.exp(t - e)
            return u, u * (1.0 + e)
        lo, hi = _EXP_RANGE
        pts = ()
    else:
        def phi(t):
            u = math.exp(0.5 * math.pi * math.sinh(t))
            return u, u * 0.5 * math.pi * math.cosh(t)
        lo, hi = _GAUSS_RANGE
        pts = tuple(math.asinh(2.0 / math.pi * math.log((p - a) / s))
                    for p in req.points if p > a)
        pts = tuple(t for t in pts if lo < t < hi)

    def g(t):
        u, du = phi(t)
        with np.errstate(over='ignore', under='ignore', invalid='ignore'):
            try:
                value = f(a + s * u) * s * du
            except (OverflowError, ZeroDivisionError):
                return 0.0
        # Only the far tails of the map can overflow, where the integrand
        # itself is negligible.
        return value if math.isfinite(value) else 0.0

    return g, lo, hi, pts


def integrate_request(req, strict=True):
    """Adaptive quadrature of a QuadratureRequest.

    Parameters
    ----------
    req : QuadratureRequest
    strict : bool (default True)
        Raise NonConvergence instead of returning an unconverged result.

    Returns
    -------
    QuadratureResult
        `converged` is True iff err_est <= max(abs_tol, rel_tol*|value|).
    """
    g, lo, hi, pts = _finite_form(req)
    kwargs = dict(epsabs=req.abs_tol, epsrel=req.rel_tol,
                  limit=req.max_subdivisions, full_output=1)
    pts = sorted(p for p in pts if lo < p < hi)
    if pts:
        kwargs['points'] = pts
    # full_output returns QUADPACK's message in place of an
    # IntegrationWarning.
    out = quadpack.quad(g, lo, hi, **kwargs)
    value, err, info = out[0], out[1], out[2]
    err = max(err, _ROUNDOFF * abs(value))
    converged = (math.isfinite(value) and
                 err <= max(req.abs_tol, req.rel_tol * abs(value)))
    result = QuadratureResult(value=float(value), err_est=float(err),
                              subdivisions_used=int(info.get('last', 0)),
                              converged=bool(converged))
    if strict and not converged:
        message = out[3] if len(out) > 3 else ''
        raise NonConvergence('quadrature did not converge: value {0:.6g}, '
                             'error estimate {1:.3g}. {2}'
                             .format(value, err, message).strip())
    return result


def integrate(integrand, lower, upper=np.inf, **kwargs):
    """Convenience wrapper building the QuadratureRequest in place.

    >>> round(integrate(lambda t: t, 0.0, 1.0).value, 12)
    0.5
    """
    strict = kwargs.pop('strict', True)
    return integrate_request(QuadratureRequest(integrand, lower, upper,
                                               **kwargs), strict=strict)


def radial_measure(d):
    """The radial prefactor 2/((4 pi)^(d/2) Gamma(d/2)) of a
    d-dimensional rotationally symmetric momentum integral.

    >>> round(radial_measure(3) * 2 * math.pi ** 2, 12)
    1.0
    """
    if not d > 0:
        raise DomainError('radial measure needs d > 0')
    return 2.0 / ((4 * math.pi) ** (0.5 * d) * specfun.gamma(0.5 * d).value)


def radial_integrand(p, damping=None):
    """p^(d-1) (p^2+m2)^(-alpha) (p^2+M2)^(-beta) times an optional
    damping factor, as a scalar function of the radial momentum."""
    d, alpha, m2 = p.d, p.alpha, p.m2
    beta = p.beta if p.two_mass else 0.0
    M2 = p.M2 if p.two_mass else 0.0

    def f(q):
        q2 = q * q
        value = q ** (d - 1) * (q2 + m2) ** (-alpha)
        if beta:
            value *= (q2 + M2) ** (-beta)
        if damping is not None:
            value *= damping(q, q2)
        return value
    return f


def _mass_points(p, lo, hi):
    masses = [p.m2] + ([p.M2] if p.two_mass else [])
    return tuple(sorted(math.sqrt(x) for x in masses
                        if x > 0 and lo < math.sqrt(x) < hi))


def scheme_oracle(p, s=None, tol=DEFAULT_RTOL):
    """Quadrature of the defining integral of the family `s` at `p`.

    Parameters
    ----------
    p : Params
    s : SchemeSpec or None
        None evaluates the unregulated radial integral, which is only
        meaningful in the convergent region.
    tol : float
        Relative tolerance.

    Returns
    -------
    QuadratureResult
        Already multiplied by radial_measure(d), except for the two demo
        families whose integrands are fixed.
    """
    family = s.family if s is not None else None
    kw = dict(rel_tol=tol)
    if family == 'mellin_demo':
        x, y = 0.5 * p.d + s.z, p.alpha - s.z - 0.5 * p.d
        if not (x > 0 and y > 0):
            raise DomainError('Mellin integrand diverges for these indices')
        return integrate(lambda t: t ** (x - 1) * (1 + t) ** (-p.alpha),
                         0.0, decay='power', **kw)
    if family == 'quartic_demo':
        a = s.a
        return integrate(lambda x: x * x / (a * x ** 4 + x * x + 1), 0.0,
                         decay='power', **kw)

    measure = radial_measure(p.d)
    if family is None:
        f = radial_integrand(p)
        req = dict(lower=0.0, decay='power',
                   scale=math.sqrt(max(p.m2, p.M2 or 0.0)) or 1.0)
    elif family in ('cutoff_uv', 'ir_window', 'separate_cutoff'):
        lo = {'cutoff_uv': 0.0, 'ir_window': 1.0 / s.K,
              'separate_cutoff': s.delta}[family]
        if family == 'ir_window' and s.K == 1:
            return QuadratureResult(0.0, 0.0, 0, True)
        f = radial_integrand(p)
        req = dict(lower=lo, upper=s.K, points=_mass_points(p, lo, s.K))
    elif family in ('gaussian_uv', 'gaussian_ir'):
        delta = s.delta
        f = radial_integrand(p, lambda q, q2: math.exp(-delta * q2))
        lo = 0.0 if family == 'gaussian_uv' else delta
        req = dict(lower=lo, decay='gaussian', scale=1.0 / math.sqrt(delta),
                   points=_mass_points(p, lo, np.inf))
    elif family in ('two_sided_gaussian', 'separate_two_sided'):
        delta = s.delta
        xi = s.xi if family == 'separate_two_sided' else s.delta
        f = radial_integrand(
            p, lambda q, q2: math.exp(-delta * q2 - xi / q2))
        req = dict(lower=0.0, decay='gaussian', scale=1.0 / math.sqrt(delta),
                   points=_mass_points(p, 0.0, np.inf))
    else:
        raise DomainError('no oracle for family {0!r}'.format(family))

    res = integrate(f, **req, **kw)
    return QuadratureResult(value=measure * res.value,
                            err_est=measure * res.err_est,
                            subdivisions_used=res.subdivisions_used,
                            converged=res.converged)


def _test():
    import doctest
    doctest.testmod()

if __name__ == "__main__":
    _test()
