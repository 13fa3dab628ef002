"""
Regulated one-loop integrals: every regulator family with its numeric value
and, where one exists, its expansion into scale-tagged series.

Families
--------
cutoff_uv            p <= K
gaussian_uv          exp(-delta p^2)
ir_window            1/K <= p <= K
gaussian_ir          exp(-delta p^2), p >= delta
two_sided_gaussian   exp(-delta p^2 - delta/p^2)
separate_cutoff      delta <= p <= K
separate_two_sided   exp(-delta p^2 - xi/p^2)
mellin_demo          monomial regulator (t^z), kept as a demonstration
quartic_demo         quartic denominator, kept as a demonstration

Each family is a subclass of :class:`loopreg.base.BaseRegulator`, found in
REGULATORS by family name.  The module-level functions are thin wrappers
that build the regulator and call it.

Throughout, N = 1/((4 pi)^(d/2) Gamma(d/2)) is half the radial measure.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from loopreg import dimreg, oracle, specfun
from loopreg.base import (BaseRegulator, EvalResult, DEFAULT_N_MAX,
                          TRUNCATION_LIMIT)
from loopreg.series import (FormalSeries, SymbolicExponent, Term, eval_at,
                            normalize)
from loopreg.utils import (DivergentInput, DomainError, PoleError,
                           POLE_TOLERANCE, binomial, check_pole,
                           is_near_integer, relative_residual)


__all__ = ['DEFAULT_N_MAX',
           'TRUNCATION_LIMIT',
           'CutoffRegulator',
           'GaussianRegulator',
           'WindowRegulator',
           'GaussianIRRegulator',
           'TwoSidedRegulator',
           'SeparateCutoffRegulator',
           'MellinDemo',
           'QuarticDemo',
           'REGULATORS',
           'regulator_for',
           'cutoff_eval',
           'cutoff_series',
           'gaussian_eval',
           'gaussian_series',
           'two_mass_cutoff',
           'two_mass_gaussian',
           'ir_window_eval',
           'ir_window_series',
           'gaussian_ir_eval',
           'gaussian_ir_series',
           'gaussian_ir_decomposition',
           'gaussian_ir_u_candidates',
           'two_sided_eval',
           'two_sided_series',
           'two_sided_massless_closed_form',
           'two_sided_prefactor_report',
           'separate_cutoff_eval',
           'separate_cutoff_series',
           'incomplete_demo',
           'demo_continuation_target',
           'UCandidateReport',
           'PrefactorReport']


HALF = Fraction(1, 2)

# Double sums stop along an index once the term, evaluated at the actual
# scales, is below this fraction of the leading term.
_NEGLIGIBLE = 1e-30

_EPS = np.finfo(float).eps

_POLE_HINT = ('evaluate at d - 2*eps for a small user-chosen eps instead '
              '(the integer case carries logarithms)')


def _norm(d):
    return 0.5 * oracle.radial_measure(d)


def _exp(c0=0, cd=0, ca=0, cb=0):
    return SymbolicExponent(Fraction(c0), Fraction(cd), Fraction(ca),
                            Fraction(cb))


def _bindings(p):
    return (float(p.d), float(p.alpha), float(p.beta or 0.0))


class _Terms:
    """Collects series terms and the size of the outermost shell of the
    summation, evaluated at the actual scales."""

    def __init__(self, p, scale_values):
        self.bindings = _bindings(p)
        self.scale_values = dict(scale_values)
        self.terms = []
        self.edge = 0.0

    def add(self, coeff, exponents=None, edge=False):
        term = Term.make(coeff, exponents)
        self.terms.append(term)
        value = term.value(self.scale_values, self.bindings)
        if edge:
            self.edge += abs(value)
        return value

    def build(self, note):
        return normalize(FormalSeries(tuple(self.terms), note,
                                      self.bindings))


def _merge_powers(s, p):
    """Rewrite a single-propagator series at power alpha+beta into the
    exponents of the two-propagator parameters `p`."""
    terms = tuple(Term.make(t.coeff,
                            {n: SymbolicExponent(e.c0, e.cd, e.ca, e.ca)
                             for n, e in t.scale_exponents},
                            dict(t.log_powers))
                  for t in s.terms)
    return normalize(FormalSeries(terms, s.truncation_note, _bindings(p)))


def _merged(p):
    return p.replace(alpha=p.alpha + p.beta, beta=None, M2=None)


def _massless(p):
    return p.m2 == 0 and not p.two_mass


def _require_ordered(p, what):
    if p.M2 is None:
        raise DomainError('{0} needs M2 with a second propagator'
                          .format(what))
    if not p.M2 >= p.m2 > 0:
        raise DomainError('{0} needs M2 >= m2 > 0; swap (alpha, m2) with '
                          '(beta, M2)'.format(what))


def _massless_pole(p, what):
    """The massless window forms divide by d - 2*alpha."""
    gap = p.d - 2 * p.alpha
    if abs(gap) < POLE_TOLERANCE:
        raise PoleError(what, 0.0, abs(gap), hint=_POLE_HINT)
    return gap


def _difference(upper, lower):
    return EvalResult(upper.value - lower.value,
                      upper.abs_err + lower.abs_err, 'closed_form')


def _cutoff_closed_form(p, K):
    """Int over p <= K in its hypergeometric form (Appell F1 for two
    propagators)."""
    d, a, m2 = p.d, p.alpha, p.m2
    lead = K ** d / ((4 * math.pi) ** (0.5 * d)
                     * specfun.gamma(1 + 0.5 * d).value)
    if p.two_mass:
        _require_ordered(p, 'two_mass_cutoff')
        K2 = K * K
        f = specfun.appell_f1(0.5 * d, a, p.beta, 0.5 * d + 1,
                              -K2 / m2, -K2 / p.M2)
        prefactor = lead * m2 ** (-a) * p.M2 ** (-p.beta)
    elif m2 == 0:
        gap = p.d - 2 * a
        if not gap > 0:
            raise DivergentInput('massless cut-off integral diverges at '
                                 'p -> 0 for d <= 2*alpha')
        value = 2 * _norm(d) * K ** gap / gap
        return EvalResult(value, 8 * _EPS * abs(value), 'closed_form')
    else:
        f = specfun.hyp2f1(a, 0.5 * d, 1 + 0.5 * d, -K * K / m2)
        prefactor = lead * m2 ** (-a)
    value = prefactor * f.value
    err = abs(prefactor) * f.abs_err + 8 * _EPS * abs(value)
    return EvalResult(value, err, 'closed_form')


def _cutoff_terms(p, K, n_max):
    """Large-K expansion of the cut-off integral; the K-free term is the
    dimensionally regularized master integral."""
    d, a, m2 = p.d, p.alpha, p.m2
    norm = _norm(d)
    acc = _Terms(p, {'K': K})
    if p.two_mass:
        _require_ordered(p, 'two_mass_cutoff')
        if not K * K > p.M2:
            raise DomainError('two-mass cut-off series needs K^2 > M2')
        master = dimreg.two_mass_master(p).value
        acc.add(master)
        b, M2 = p.beta, p.M2
        for j in range(n_max + 1):
            denom = 0.5 * d - a - b - j
            if abs(denom) < POLE_TOLERANCE:
                raise PoleError('two_mass_cutoff', -float(j), abs(denom),
                                hint=_POLE_HINT)
            coeff = math.fsum(binomial(-a, n) * binomial(-b, j - n)
                              * m2 ** n * M2 ** (j - n)
                              for n in range(j + 1))
            acc.add(norm * coeff / denom, {'K': _exp(-2 * j, 1, -2, -2)},
                    edge=(j == n_max))
        return acc

    if m2 == 0:
        gap = _massless_pole(p, 'cutoff_series')
        acc.add(2 * norm / gap, {'K': _exp(0, 1, -2)})
        return acc

    if not K * K > m2:
        raise DomainError('cut-off series needs K^2 > m2 (K = {0!r}, '
                          'm2 = {1!r})'.format(K, m2))
    acc.add(dimreg.master_one_loop(p).value)
    for n in range(n_max + 1):
        coeff = norm * binomial(-a, n) * m2 ** n / (0.5 * d - a - n)
        acc.add(coeff, {'K': _exp(-2 * n, 1, -2)}, edge=(n == n_max))
    return acc


def _small_cutoff_terms(p, acc, name, n_max):
    """Small-scale expansion of the cut-off integral up to `scale`, which
    enters as scale^(d+2n) (or K^-(d+2n) for the window's 1/K)."""
    d, a, m2 = p.d, p.alpha, p.m2
    norm = _norm(d)
    reciprocal = name == 'K'
    for n in range(n_max + 1):
        coeff = (-norm * m2 ** (-a) * binomial(-a, n) * m2 ** (-n)
                 / (0.5 * d + n))
        e = _exp(2 * n, 1) if not reciprocal else _exp(-2 * n, -1)
        acc.add(coeff, {name: e}, edge=(n == n_max))
    return acc


def _gaussian_terms(p, delta, n_max):
    """Small-delta expansion of the Gaussian-regulated integral from the
    connection formula of U; two branches with integer and with
    alpha - d/2 + n powers of delta."""
    d, a, m2 = p.d, p.alpha, p.m2
    index = a - 0.5 * d
    if is_near_integer(index, POLE_TOLERANCE):
        raise PoleError('gaussian_series', float(round(index)),
                        abs(index - round(index)), hint=_POLE_HINT)
    if not delta * m2 < 1:
        raise DomainError('Gaussian series needs delta*m2 < 1 (got {0!r})'
                          .format(delta * m2))
    norm = _norm(d)
    acc = _Terms(p, {'delta': delta})
    second = norm * specfun.gamma(-index).value
    if m2 == 0:
        acc.add(second, {'delta': _exp(0, -HALF, 1)})
        return acc

    coeff = dimreg.master_one_loop(p).value
    for n in range(n_max + 1):
        if n:
            coeff *= (0.5 * d + n - 1) / ((1 - index + n - 1) * n) * m2
        acc.add(coeff, {'delta': _exp(n)}, edge=(n == n_max))
        if coeff == 0:
            break
    coeff = second
    for n in range(n_max + 1):
        if n:
            coeff *= (a + n - 1) / ((1 + index + n - 1) * n) * m2
        acc.add(coeff, {'delta': _exp(n, -HALF, 1)}, edge=(n == n_max))
        if coeff == 0:
            break
    return acc


def _two_mass_gaussian_terms(p, delta, n_max):
    """Two-propagator Gaussian series: the momentum range is cut at
    p^2 = M2; the lower part gives integer powers of delta with numerically
    integrated coefficients, the upper part generalized exponential
    integrals E_omega(delta M2) expanded for small argument."""
    d, a, b, m2, M2 = p.d, p.alpha, p.beta, p.m2, p.M2
    c = a + b - 0.5 * d
    if is_near_integer(c, POLE_TOLERANCE):
        raise PoleError('two_mass_gaussian', float(round(c)),
                        abs(c - round(c)), hint=_POLE_HINT)
    if not delta * M2 < 1:
        raise DomainError('two-mass Gaussian series needs delta*M2 < 1')
    norm = _norm(d)
    M = math.sqrt(M2)
    r = m2 / M2
    low = norm * M ** (d - 2 * b)
    high = norm * M ** (d - 2 * a - 2 * b)
    acc = _Terms(p, {'delta': delta})

    lead = None
    factor = 1.0
    for j in range(n_max + 1):
        if j:
            factor *= -M2 / j
        piece = dimreg.two_mass_lower_piece(p, j).value
        inner = math.fsum(binomial(-a, n) * r ** n
                          * specfun.binomial_reciprocal_sum(b, c + n - j).value
                          for n in range(n_max + 1))
        value = acc.add(factor * (low * piece + high * inner),
                        {'delta': _exp(j)}, edge=(j == n_max))
        if lead is None:
            lead = abs(value)
        elif abs(value) < _NEGLIGIBLE * lead:
            break

    for n in range(n_max + 1):
        weight = high * binomial(-a, n) * r ** n
        for k in range(n_max + 1):
            power = c + n + k
            coeff = (weight * binomial(-b, k) * specfun.gamma(-power).value
                     * M2 ** power)
            value = acc.add(coeff, {'delta': _exp(n + k, -HALF, 1, 1)},
                            edge=(max(n, k) == n_max))
            if abs(value) < _NEGLIGIBLE * lead:
                break
    return acc


def _gaussian_ir_lower_terms(p, acc, delta, n_max):
    """Subtracts the [0, delta] piece of the Gaussian integral, expanded in
    the mass (delta^2 < m2) and in the damping."""
    d, a, m2 = p.d, p.alpha, p.m2
    norm = _norm(d)
    lead = None
    for n in range(n_max + 1):
        weight = -norm * m2 ** (-a) * binomial(-a, n) * m2 ** (-n)
        factor = 1.0
        for j in range(n_max + 1):
            if j:
                factor *= -1.0 / j
            value = acc.add(weight * factor / (0.5 * d + n + j),
                            {'delta': _exp(2 * n + 3 * j, 1)},
                            edge=(max(n, j) == n_max))
            if lead is None:
                lead = abs(value) or 1.0
            elif abs(value) < _NEGLIGIBLE * lead:
                break
    return acc


def _two_sided_terms(p, delta, xi, n_max):
    """Series of the integral damped by exp(-delta p^2 - xi/p^2) in both
    scales.  The momentum range is cut at p^2 = m2; inside, exp(-delta p^2)
    and the mass are expanded, outside exp(-xi/p^2) and the mass, leaving
    generalized exponential integrals in xi/m2 and delta*m2."""
    d, a, m2 = p.d, p.alpha, p.m2
    norm = _norm(d)
    acc = _Terms(p, {'delta': delta, 'xi': xi})

    if m2 == 0:
        nu = 0.5 * d - a
        check_pole('two_sided_series', nu, hint=_POLE_HINT)
        check_pole('two_sided_series', -nu, hint=_POLE_HINT)
        g_plus = norm * specfun.gamma(nu).value
        g_minus = norm * specfun.gamma(-nu).value
        for k in range(n_max + 1):
            if k:
                g_plus /= k * (k - nu)
                g_minus /= k * (k + nu)
            edge = k == n_max
            acc.add(g_plus, {'delta': _exp(k, -HALF, 1), 'xi': _exp(k)},
                    edge=edge)
            acc.add(g_minus, {'xi': _exp(k, HALF, -1), 'delta': _exp(k)},
                    edge=edge)
        return acc

    half = 0.5 * d
    if is_near_integer(half, POLE_TOLERANCE):
        raise PoleError('two_sided_series', -float(round(half)),
                        abs(half - round(half)), hint=_POLE_HINT)
    index = a - half
    if is_near_integer(index, POLE_TOLERANCE):
        raise PoleError('two_sided_series', float(round(index)),
                        abs(index - round(index)), hint=_POLE_HINT)
    overall = norm * m2 ** (half - a)
    lead = abs(dimreg.master_one_loop(p).value) or 1.0

    def negligible(value):
        return abs(value) < _NEGLIGIBLE * lead

    # Inner region: delta^k xi^j, and xi^(d/2+n+k) delta^k.
    fk = 1.0
    for k in range(n_max + 1):
        if k:
            fk *= -m2 / k
        fj = 1.0
        for j in range(n_max + 1):
            if j:
                fj *= -1.0 / (m2 * j)
            s = specfun.binomial_reciprocal_sum(a, half + k - j).value
            value = acc.add(overall * fk * fj * s,
                            {'delta': _exp(k), 'xi': _exp(j)},
                            edge=(max(k, j) == n_max))
            if j and negligible(value):
                break
        for n in range(n_max + 1):
            mu = half + n + k
            coeff = (overall * binomial(-a, n) * fk
                     * specfun.gamma(-mu).value * m2 ** (-mu))
            value = acc.add(coeff, {'delta': _exp(k),
                                    'xi': _exp(n + k, HALF)},
                            edge=(max(n, k) == n_max))
            if negligible(value):
                break
        if k and negligible(fk * delta ** k * overall):
            break

    # Outer region: xi^k delta^j, and delta^(alpha-d/2+n+k) xi^k.
    fk = 1.0
    for k in range(n_max + 1):
        if k:
            fk *= -1.0 / (m2 * k)
        fj = 1.0
        for j in range(n_max + 1):
            if j:
                fj *= -m2 / j
            s = specfun.binomial_reciprocal_sum(a, index + k - j).value
            value = acc.add(overall * fk * fj * s,
                            {'xi': _exp(k), 'delta': _exp(j)},
                            edge=(max(k, j) == n_max))
            if j and negligible(value):
                break
        for n in range(n_max + 1):
            nu = index + n + k
            coeff = (overall * binomial(-a, n) * fk
                     * specfun.gamma(-nu).value * m2 ** nu)
            value = acc.add(coeff, {'xi': _exp(k),
                                    'delta': _exp(n + k, -HALF, 1)},
                            edge=(max(n, k) == n_max))
            if negligible(value):
                break
        if k and negligible(fk * xi ** k * overall):
            break
    return acc


class CutoffRegulator(BaseRegulator):
    """Sharp ultraviolet cut-off p <= K.

    The value is the hypergeometric closed form, finite for every real
    alpha; the series is the large-K expansion, whose K-free term is the
    dimensionally regularized master integral.  A second propagator
    switches to the Appell F1 form and the double expansion.
    """

    families = ('cutoff_uv',)

    def evaluate(self, params):
        self._log(1, 'cutoff_uv: closed form at K = {0!r}'
                  .format(self.spec.K))
        return _cutoff_closed_form(params, self.spec.K)

    def expand(self, params):
        K = self.spec.K
        acc = _cutoff_terms(params, K, self.n_max)
        series = acc.build('O((m2/K^2)^{0}) relative'.format(self.n_max + 1))
        self._check_truncation(acc.edge, eval_at(series, acc.scale_values),
                               'cutoff_series')
        self._log(2, 'cutoff_series: {0} terms, edge {1:.3g}'
                  .format(len(series), acc.edge))
        return series


class GaussianRegulator(BaseRegulator):
    """Gaussian damping exp(-delta p^2) of the ultraviolet region.

    The single-propagator value is the Tricomi U closed form; two
    propagators have no closed form and are integrated numerically.
    """

    families = ('gaussian_uv',)

    def evaluate(self, params):
        delta = self.spec.delta
        if params.two_mass:
            _require_ordered(params, 'two_mass_gaussian')
            res = self.oracle(params)
            return EvalResult(res.value, res.err_est, 'quadrature')
        d, a, m2 = params.d, params.alpha, params.m2
        if m2 == 0:
            index = a - 0.5 * d
            if not index < 0:
                raise DivergentInput('massless Gaussian integral diverges at '
                                     'p -> 0 for d <= 2*alpha')
            g = specfun.gamma(-index)
            prefactor = _norm(d) * delta ** index
            return EvalResult(prefactor * g.value, prefactor * g.abs_err,
                              'closed_form')
        u = specfun.tricomi_u(0.5 * d, 0.5 * d + 1 - a, m2 * delta)
        self._log(1, 'gaussian_uv: U evaluated by {0}'.format(u.method))
        prefactor = m2 ** (0.5 * d - a) / (4 * math.pi) ** (0.5 * d)
        value = prefactor * u.value
        return EvalResult(value, abs(prefactor) * u.abs_err
                          + 8 * _EPS * abs(value), 'closed_form')

    def expand(self, params):
        delta = self.spec.delta
        if params.two_mass:
            _require_ordered(params, 'two_mass_gaussian')
            if params.m2 == params.M2:
                q = _merged(params)
                acc = _gaussian_terms(q, delta, self.n_max)
                series = _merge_powers(acc.build(''), params)
            else:
                acc = _two_mass_gaussian_terms(params, delta, self.n_max)
                series = acc.build('')
        else:
            acc = _gaussian_terms(params, delta, self.n_max)
            series = acc.build('')
        series = FormalSeries(series.terms, 'O(delta^{0}) relative'
                              .format(self.n_max + 1), series.bindings)
        self._check_truncation(acc.edge, eval_at(series, acc.scale_values),
                               'gaussian_series')
        return series


class WindowRegulator(BaseRegulator):
    """Cut-off window 1/K <= p <= K, finite in both the ultraviolet and the
    infrared.  Its value is the difference of two cut-off integrals."""

    families = ('ir_window',)

    def evaluate(self, params):
        K = self.spec.K
        if K == 1:
            return EvalResult(0.0, 0.0, 'closed_form', note='empty window')
        if _massless(params):
            gap = _massless_pole(params, 'ir_window_eval')
            value = 2 * _norm(params.d) / gap * (K ** gap - K ** (-gap))
            return EvalResult(value, 8 * _EPS * abs(value), 'closed_form')
        return _difference(_cutoff_closed_form(params, K),
                           _cutoff_closed_form(params, 1.0 / K))

    def expand(self, params):
        K = self.spec.K
        if params.two_mass:
            raise DomainError('ir_window series takes a single propagator')
        if _massless(params):
            gap = _massless_pole(params, 'ir_window_series')
            acc = _Terms(params, {'K': K})
            coeff = 2 * _norm(params.d) / gap
            acc.add(coeff, {'K': _exp(0, 1, -2)})
            acc.add(-coeff, {'K': _exp(0, -1, 2)})
            return acc.build('exact')
        if not K * K * params.m2 > 1:
            raise DomainError('ir_window series needs 1/K^2 < m2 < K^2')
        acc = _cutoff_terms(params, K, self.n_max)
        _small_cutoff_terms(params, acc, 'K', self.n_max)
        series = acc.build('O((m2/K^2)^{0}, (1/(K^2 m2))^{0})'
                           .format(self.n_max + 1))
        self._check_truncation(acc.edge, eval_at(series, acc.scale_values),
                               'ir_window_series')
        return series


class SeparateCutoffRegulator(BaseRegulator):
    """Cut-off window delta <= p <= K with independent scales."""

    families = ('separate_cutoff',)

    def evaluate(self, params):
        K, delta = self.spec.K, self.spec.delta
        if _massless(params):
            gap = _massless_pole(params, 'separate_cutoff_eval')
            value = 2 * _norm(params.d) / gap * (K ** gap - delta ** gap)
            return EvalResult(value, 8 * _EPS * abs(value), 'closed_form')
        return _difference(_cutoff_closed_form(params, K),
                           _cutoff_closed_form(params, delta))

    def expand(self, params):
        K, delta = self.spec.K, self.spec.delta
        if params.two_mass:
            raise DomainError('separate_cutoff series takes a single '
                              'propagator')
        if _massless(params):
            gap = _massless_pole(params, 'separate_cutoff_series')
            acc = _Terms(params, {'K': K, 'delta': delta})
            coeff = 2 * _norm(params.d) / gap
            acc.add(coeff, {'K': _exp(0, 1, -2)})
            acc.add(-coeff, {'delta': _exp(0, 1, -2)})
            return acc.build('exact')
        if not delta * delta < params.m2:
            raise DomainError('separate_cutoff series needs delta^2 < m2 '
                              '< K^2')
        acc = _cutoff_terms(params, K, self.n_max)
        acc.scale_values['delta'] = delta
        _small_cutoff_terms(params, acc, 'delta', self.n_max)
        series = acc.build('O((m2/K^2)^{0}, (delta^2/m2)^{0})'
                           .format(self.n_max + 1))
        self._check_truncation(acc.edge, eval_at(series, acc.scale_values),
                               'separate_cutoff_series')
        return series


class GaussianIRRegulator(BaseRegulator):
    """Gaussian damping with the lower limit p >= delta.

    The defining integral is evaluated by quadrature; the Gaussian closed
    form minus the [0, delta] piece is available as a cross-check through
    :func:`gaussian_ir_decomposition`.
    """

    families = ('gaussian_ir',)

    def evaluate(self, params):
        res = self.oracle(params)
        return EvalResult(res.value, res.err_est, 'quadrature')

    def expand(self, params):
        delta = self.spec.delta
        if params.two_mass:
            raise DomainError('gaussian_ir series takes a single propagator')
        if _massless(params):
            s = 0.5 * params.d - params.alpha
            check_pole('gaussian_ir_series', s, hint=_POLE_HINT)
            norm = _norm(params.d)
            acc = _Terms(params, {'delta': delta})
            acc.add(norm * specfun.gamma(s).value, {'delta': _exp(0, -HALF, 1)})
            factor = 1.0
            for j in range(self.n_max + 1):
                if j:
                    factor *= -1.0 / j
                value = acc.add(-norm * factor / (s + j),
                                {'delta': _exp(3 * j, 1, -2)},
                                edge=(j == self.n_max))
                if j and abs(value) < _NEGLIGIBLE * abs(acc.terms[0].coeff):
                    break
            series = acc.build('O(delta^(3*{0}))'.format(self.n_max + 1))
        else:
            if not delta * delta < params.m2:
                raise DomainError('gaussian_ir series needs delta^2 < m2')
            acc = _gaussian_terms(params, delta, self.n_max)
            _gaussian_ir_lower_terms(params, acc, delta, self.n_max)
            series = acc.build('O(delta^{0}) relative'.format(self.n_max + 1))
        self._check_truncation(acc.edge, eval_at(series, acc.scale_values),
                               'gaussian_ir_series')
        return series


class TwoSidedRegulator(BaseRegulator):
    """Damping exp(-delta p^2 - xi/p^2) of both ends of the radial integral;
    xi is delta itself for the two_sided_gaussian family.

    The value is the defining integral by quadrature; massless integrals
    also have a modified Bessel closed form.
    """

    families = ('two_sided_gaussian', 'separate_two_sided')

    @property
    def xi(self):
        if self.spec.family == 'two_sided_gaussian':
            return self.spec.delta
        return self.spec.xi

    def evaluate(self, params):
        res = self.oracle(params)
        return EvalResult(res.value, res.err_est, 'quadrature')

    def closed_form(self, params):
        """2N (xi/delta)^(nu/2) K_nu(2 sqrt(xi delta)), nu = d/2 - alpha."""
        if not _massless(params):
            raise DomainError('the Bessel closed form needs m2 = 0')
        delta, xi = self.spec.delta, self.xi
        nu = 0.5 * params.d - params.alpha
        k = specfun.bessel_k(nu, 2 * math.sqrt(xi * delta))
        prefactor = 2 * _norm(params.d) * (xi / delta) ** (0.5 * nu)
        value = prefactor * k.value
        return EvalResult(value, prefactor * k.abs_err + 8 * _EPS * abs(value),
                          'closed_form')

    def expand(self, params):
        if params.two_mass:
            raise DomainError('two-sided series takes a single propagator')
        delta, xi = self.spec.delta, self.xi
        acc = _two_sided_terms(params, delta, xi, self.n_max)
        series = acc.build('O(scale^{0})'.format(self.n_max + 1))
        if self.spec.family == 'two_sided_gaussian':
            series = series.rename_scale('xi', 'delta')
        self._check_truncation(acc.edge, eval_at(series, acc.scale_values),
                               'two_sided_series')
        return series


class MellinDemo(BaseRegulator):
    """Monomial regulator t^z inserted into the Mellin form of the radial
    integral, giving B(d/2 + z, alpha - z - d/2).  Fails for alpha <= 0.
    """

    families = ('mellin_demo',)

    def evaluate(self, params):
        if not params.alpha > 0:
            raise DivergentInput('the Mellin regulator cannot regulate '
                                 'alpha <= 0 (got {0!r})'
                                 .format(params.alpha))
        z = self.spec.z
        b = specfun.beta_series(0.5 * params.d + z,
                                params.alpha - z - 0.5 * params.d)
        return EvalResult(b.value, b.abs_err, 'demo')


class QuarticDemo(BaseRegulator):
    """Quartic term a x^4 added to the denominator of the d = 3,
    alpha = 1 radial integrand x^2/(x^2 + 1).  Converges for every
    0 < a < 1/4 but does not continue to -pi/2 as a -> 0."""

    families = ('quartic_demo',)

    def evaluate(self, params):
        if not params.alpha > 0:
            raise DivergentInput('the quartic regulator cannot regulate '
                                 'alpha <= 0 (got {0!r})'
                                 .format(params.alpha))
        if (params.d, params.alpha) != (3, 1):
            raise DomainError('the quartic demo is fixed to d = 3, '
                              'alpha = 1')
        a = self.spec.a
        if not 0 < a < 0.25:
            raise DomainError('the quartic demo needs 0 < a < 1/4')
        root = math.sqrt(1 - 4 * a)
        w_plus = (1 + root) / (2 * a)
        w_minus = (1 - root) / (2 * a)
        value = (math.pi / (2 * a) * (math.sqrt(w_plus) - math.sqrt(w_minus))
                 / (w_plus - w_minus))
        return EvalResult(value, 16 * _EPS * abs(value), 'demo')


REGULATORS = {family: cls
              for cls in (CutoffRegulator, GaussianRegulator, WindowRegulator,
                          GaussianIRRegulator, TwoSidedRegulator,
                          SeparateCutoffRegulator, MellinDemo, QuarticDemo)
              for family in cls.families}


def regulator_for(spec, **kwargs):
    """Build the regulator for `spec.family`; keyword arguments go to its
    constructor."""
    try:
        cls = REGULATORS[spec.family]
    except KeyError:
        raise DomainError('no regulator for family {0!r}'.format(spec.family))
    return cls(spec, **kwargs)


def cutoff_eval(p, s, **kwargs):
    return CutoffRegulator(s, **kwargs).evaluate(p)


def cutoff_series(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    return CutoffRegulator(s, n_max=n_max, **kwargs).expand(p)


def gaussian_eval(p, s, **kwargs):
    return GaussianRegulator(s, **kwargs).evaluate(p)


def gaussian_series(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    return GaussianRegulator(s, n_max=n_max, **kwargs).expand(p)


def two_mass_cutoff(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    """Value (Appell F1) and large-K double series of the two-propagator
    cut-off integral.

    Returns
    -------
    (EvalResult, FormalSeries)
    """
    reg = CutoffRegulator(s, n_max=n_max, **kwargs)
    return reg.evaluate(p), reg.expand(p)


def two_mass_gaussian(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    """Value (quadrature) and small-delta series of the two-propagator
    Gaussian integral.

    Returns
    -------
    (EvalResult, FormalSeries)
    """
    reg = GaussianRegulator(s, n_max=n_max, **kwargs)
    return reg.evaluate(p), reg.expand(p)


def ir_window_eval(p, s, **kwargs):
    return WindowRegulator(s, **kwargs).evaluate(p)


def ir_window_series(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    return WindowRegulator(s, n_max=n_max, **kwargs).expand(p)


def gaussian_ir_eval(p, s, **kwargs):
    return GaussianIRRegulator(s, **kwargs).evaluate(p)


def gaussian_ir_series(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    return GaussianIRRegulator(s, n_max=n_max, **kwargs).expand(p)


def gaussian_ir_decomposition(p, s, **kwargs):
    """Gaussian closed form minus the quadrature of its [0, delta] piece.
    """
    if s.family != 'gaussian_ir':
        raise DomainError('decomposition needs a gaussian_ir spec')
    full = gaussian_eval(p, s.replace(family='gaussian_uv'), **kwargs)
    delta = s.delta
    f = oracle.radial_integrand(p, lambda q, q2: math.exp(-delta * q2))
    piece = oracle.integrate(f, 0.0, delta, rel_tol=1e-13, abs_tol=1e-300)
    measure = oracle.radial_measure(p.d)
    return EvalResult(full.value - measure * piece.value,
                      full.abs_err + measure * piece.err_est, 'closed_form',
                      note='Gaussian closed form minus [0, delta] quadrature')


@dataclass(frozen=True)
class UCandidateReport:
    """Massless gaussian_ir value against its U-function form, written
    with second argument d/2 - alpha + 1 (shifted) and d/2 - alpha."""
    oracle: float
    u_shifted: float
    u_unshifted: float
    residual_shifted: float
    residual_unshifted: float


def gaussian_ir_u_candidates(p, s):
    """Compare the massless gaussian_ir integral with

        N delta^(d-2 alpha) exp(-delta^3) U(1, b, delta^3)

    for b = d/2 - alpha + 1 and b = d/2 - alpha.
    """
    if not _massless(p):
        raise DomainError('the U-form comparison needs m2 = 0')
    reg = GaussianIRRegulator(s)
    truth = reg.evaluate(p).value
    delta = s.delta
    z = delta ** 3
    prefactor = _norm(p.d) * delta ** (p.d - 2 * p.alpha) * math.exp(-z)
    b = 0.5 * p.d - p.alpha
    shifted = prefactor * specfun.tricomi_u(1, b + 1, z).value
    unshifted = prefactor * specfun.tricomi_u(1, b, z).value
    return UCandidateReport(truth, shifted, unshifted,
                            relative_residual(shifted, truth),
                            relative_residual(unshifted, truth))


def two_sided_eval(p, s, **kwargs):
    return TwoSidedRegulator(s, **kwargs).evaluate(p)


def two_sided_series(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    return TwoSidedRegulator(s, n_max=n_max, **kwargs).expand(p)


def two_sided_massless_closed_form(p, s, **kwargs):
    return TwoSidedRegulator(s, **kwargs).closed_form(p)


@dataclass(frozen=True)
class PrefactorReport:
    """Massless two-sided value against the standard Bessel identity
    2N (xi/delta)^(nu/2) K_nu and against N delta^(alpha-d/2) K_nu."""
    oracle: float
    standard: float
    displayed: float
    residual_standard: float
    residual_displayed: float


def two_sided_prefactor_report(p, s):
    reg = TwoSidedRegulator(s)
    truth = reg.evaluate(p).value
    standard = reg.closed_form(p).value
    delta, xi = s.delta, reg.xi
    index = p.alpha - 0.5 * p.d
    displayed = (_norm(p.d) * delta ** index
                 * specfun.bessel_k(index, 2 * math.sqrt(xi * delta)).value)
    return PrefactorReport(truth, standard, displayed,
                           relative_residual(standard, truth),
                           relative_residual(displayed, truth))


def separate_cutoff_eval(p, s, **kwargs):
    return SeparateCutoffRegulator(s, **kwargs).evaluate(p)


def separate_cutoff_series(p, s, n_max=DEFAULT_N_MAX, **kwargs):
    return SeparateCutoffRegulator(s, n_max=n_max, **kwargs).expand(p)


DEMO_KINDS = {'mellin': 'mellin_demo', 'quartic': 'quartic_demo'}


def incomplete_demo(kind, p, s, **kwargs):
    """Evaluate one of the two demonstration regulators.

    Parameters
    ----------
    kind : str
        'mellin' or 'quartic'.
    """
    if kind not in DEMO_KINDS:
        raise ValueError('demo kind {0!r} not understood'.format(kind))
    if s.family != DEMO_KINDS[kind]:
        raise DomainError('{0} demo needs a {1} spec'
                          .format(kind, DEMO_KINDS[kind]))
    return regulator_for(s, **kwargs).evaluate(p)


def demo_continuation_target(p):
    """(1/2) B(d/2, alpha - d/2): the dimensionally continued value of the
    radial integral int_0^inf x^(d-1) (x^2+1)^(-alpha) dx that the quartic
    regulator should approach.

    >>> from loopreg.base import Params
    >>> round(demo_continuation_target(Params(d=3, alpha=1)) / math.pi, 12)
    -0.5
    """
    return 0.5 * specfun.beta_series(0.5 * p.d, p.alpha - 0.5 * p.d).value


def _test():
    import doctest
    doctest.testmod()

if __name__ == "__main__":
    _test()
