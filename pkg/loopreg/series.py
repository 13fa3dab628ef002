"""
Formal series with scale-tagged terms, and the extraction operator.

A term is a numeric coefficient times powers of regulator scales (K, delta,
xi) whose exponents are linear forms c0 + cd*d + ca*alpha + cb*beta with
exact rational coefficients, times integer powers of logarithms of the
scales.  The extraction operator [1 - int ds d/ds] keeps exactly the terms
that carry no power and no logarithm of s; its products over several scales
are the same filter applied to each of them.

Because the exponents are symbolic, "scale-free" is an exact statement: a
term with exponent d - 2*alpha is scale-dependent even at d = 3, alpha = 1.5.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

from loopreg.utils import DomainError, PoleError, relative_residual


__all__ = ['SymbolicExponent',
           'Term',
           'FormalSeries',
           'CommutationReport',
           'normalize',
           'extract_scale',
           'extract_multi',
           'scale_dependent_part',
           'eval_at',
           'to_text',
           'from_text',
           'commutes_with_mass_derivative']


SCALE_NAMES = ('K', 'delta', 'xi')

COMMUTATION_RTOL = 1e-5


def _rational(x):
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError('exponent coefficients must be exact rationals, '
                            'got float {0!r}'.format(x))
        x = int(x)
    return Fraction(x)


@dataclass(frozen=True)
class SymbolicExponent:
    """Linear form c0 + cd*d + ca*alpha + cb*beta with rational
    coefficients.

    >>> e = SymbolicExponent(c0=-2, cd=1, ca=-2)
    >>> str(e)
    '-2 + 1*d + -2*alpha + 0*beta'
    >>> (e - e).is_zero()
    True
    """
    c0: Fraction = Fraction(0)
    cd: Fraction = Fraction(0)
    ca: Fraction = Fraction(0)
    cb: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ('c0', 'cd', 'ca', 'cb'):
            object.__setattr__(self, name, _rational(getattr(self, name)))

    def is_zero(self):
        return not (self.c0 or self.cd or self.ca or self.cb)

    def key(self):
        return (self.c0, self.cd, self.ca, self.cb)

    def evaluate(self, d, alpha, beta=0.0):
        return (float(self.c0) + float(self.cd) * d + float(self.ca) * alpha
                + float(self.cb) * (beta or 0.0))

    def __add__(self, other):
        return SymbolicExponent(self.c0 + other.c0, self.cd + other.cd,
                                self.ca + other.ca, self.cb + other.cb)

    def __neg__(self):
        return SymbolicExponent(-self.c0, -self.cd, -self.ca, -self.cb)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = _rational(k)
        return SymbolicExponent(k * self.c0, k * self.cd, k * self.ca,
                                k * self.cb)

    __rmul__ = __mul__

    def __str__(self):
        return '{0} + {1}*d + {2}*alpha + {3}*beta'.format(*self.key())

    @classmethod
    def parse(cls, text):
        m = re.fullmatch(r'\s*(\S+) \+ (\S+)\*d \+ (\S+)\*alpha \+ (\S+)\*beta'
                         r'\s*', text)
        if m is None:
            raise ValueError('cannot parse exponent {0!r}'.format(text))
        return cls(*(Fraction(g) for g in m.groups()))


@dataclass(frozen=True)
class Term:
    """coeff * prod_s s^exponent(s) * prod_s ln(s)^power(s).

    Only nonzero exponents and log powers are stored, sorted by scale
    name; use :meth:`make` to build one from dicts.
    """
    coeff: float
    scale_exponents: Tuple[Tuple[str, SymbolicExponent], ...] = ()
    log_powers: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def make(cls, coeff, exponents=None, logs=None):
        exps = []
        for name, e in sorted((exponents or {}).items()):
            _check_scale(name)
            if not isinstance(e, SymbolicExponent):
                e = SymbolicExponent(c0=e)
            if not e.is_zero():
                exps.append((name, e))
        powers = []
        for name, k in sorted((logs or {}).items()):
            _check_scale(name)
            if int(k) != k or k < 0:
                raise DomainError('log powers are non-negative integers')
            if k:
                powers.append((name, int(k)))
        return cls(float(coeff), tuple(exps), tuple(powers))

    @property
    def signature(self):
        return (tuple((n, e.key()) for n, e in self.scale_exponents),
                self.log_powers)

    def scales(self):
        return ({n for n, _ in self.scale_exponents}
                | {n for n, _ in self.log_powers})

    def depends_on(self, scale):
        return scale in self.scales()

    def is_scale_free(self):
        return not self.scale_exponents and not self.log_powers

    def value(self, scale_values, bindings):
        d, alpha, beta = bindings
        result = self.coeff
        for name, e in self.scale_exponents:
            result *= _scale(scale_values, name) ** e.evaluate(d, alpha, beta)
        for name, k in self.log_powers:
            result *= math.log(_scale(scale_values, name)) ** k
        return result


def _check_scale(name):
    if name not in SCALE_NAMES:
        raise DomainError('unknown scale {0!r}; expected one of {1}'
                          .format(name, SCALE_NAMES))


def _scale(scale_values, name):
    try:
        value = scale_values[name]
    except KeyError:
        raise DomainError('no value given for scale {0!r}'.format(name))
    if not value > 0:
        raise DomainError('scale {0} must be positive, got {1!r}'
                          .format(name, value))
    return value


@dataclass(frozen=True)
class FormalSeries:
    """A finite sum of scale-tagged terms.

    Parameters
    ----------
    terms : tuple of Term
    truncation_note : str
        Description of the omitted orders.
    bindings : (d, alpha, beta)
        Values at which the symbolic exponents are evaluated numerically.
    """
    terms: Tuple[Term, ...] = ()
    truncation_note: str = ''
    bindings: Tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))

    def __len__(self):
        return len(self.terms)

    def _combine(self, other, sign=1.0):
        if self.bindings != other.bindings:
            raise DomainError('cannot combine series bound to different '
                              '(d, alpha, beta)')
        terms = self.terms + tuple(Term(sign * t.coeff, t.scale_exponents,
                                        t.log_powers) for t in other.terms)
        notes = [n for n in (self.truncation_note, other.truncation_note) if n]
        return normalize(FormalSeries(terms, '; '.join(dict.fromkeys(notes)),
                                      self.bindings))

    def __add__(self, other):
        return self._combine(other)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, k):
        return FormalSeries(tuple(Term(k * t.coeff, t.scale_exponents,
                                       t.log_powers) for t in self.terms),
                            self.truncation_note, self.bindings)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def scale_free_value(self):
        """Sum of the scale-free coefficients."""
        return math.fsum(t.coeff for t in self.terms if t.is_scale_free())

    def rename_scale(self, old, new):
        """Identify scale `old` with `new`, merging exponents and log
        powers."""
        _check_scale(new)
        terms = []
        for t in self.terms:
            exps = {n: e for n, e in t.scale_exponents}
            logs = dict(t.log_powers)
            if old in exps:
                e = exps.pop(old)
                exps[new] = exps.get(new, SymbolicExponent()) + e
            if old in logs:
                k = logs.pop(old)
                logs[new] = logs.get(new, 0) + k
            terms.append(Term.make(t.coeff, exps, logs))
        return normalize(FormalSeries(tuple(terms), self.truncation_note,
                                      self.bindings))


def normalize(s):
    """Merge like terms, drop zero coefficients, sort by signature.

    Like coefficients are added with math.fsum, so the result does not
    depend on the order of the input terms.
    """
    groups = {}
    prototypes = {}
    for t in s.terms:
        key = t.signature
        groups.setdefault(key, []).append(t.coeff)
        prototypes.setdefault(key, t)
    terms = []
    for key in sorted(groups, key=_sort_key):
        coeff = math.fsum(groups[key])
        if coeff != 0.0:
            proto = prototypes[key]
            terms.append(Term(coeff, proto.scale_exponents, proto.log_powers))
    return FormalSeries(tuple(terms), s.truncation_note, s.bindings)


def _sort_key(signature):
    exponents, logs = signature
    return (len(exponents) + len(logs), exponents, logs)


def extract_scale(s, scale):
    """[1 - int ds d/ds]: drop every term carrying a power or a logarithm
    of `scale`."""
    _check_scale(scale)
    return FormalSeries(tuple(t for t in s.terms if not t.depends_on(scale)),
                        s.truncation_note, s.bindings)


def extract_multi(s, scales):
    """Product of the extraction operators over `scales`: keeps the terms
    free of all of them."""
    scales = set(scales)
    for name in scales:
        _check_scale(name)
    return FormalSeries(tuple(t for t in s.terms
                              if not (t.scales() & scales)),
                        s.truncation_note, s.bindings)


def scale_dependent_part(s, scales):
    """Complement of :func:`extract_multi`."""
    scales = set(scales)
    return FormalSeries(tuple(t for t in s.terms if t.scales() & scales),
                        s.truncation_note, s.bindings)


def eval_at(s, scale_values=None):
    """Numeric value of the series at the given scale values.

    >>> eval_at(FormalSeries((Term.make(5.0),)), {'K': 7.0})
    5.0
    >>> eval_at(FormalSeries())
    0.0
    """
    scale_values = scale_values or {}
    return math.fsum(t.value(scale_values, s.bindings) for t in s.terms)


def to_text(s):
    """Serialize a series, one term per line."""
    d, alpha, beta = s.bindings
    lines = ['# loopreg formal series',
             '# bindings: d={0!r} alpha={1!r} beta={2!r}'.format(
                 float(d), float(alpha), float(beta or 0.0)),
             '# truncation: {0}'.format(json.dumps(s.truncation_note))]
    for t in s.terms:
        parts = [repr(float(t.coeff))]
        parts += ['{0}^({1})'.format(n, e) for n, e in t.scale_exponents]
        parts += ['ln{0}^{1}'.format(n, k) for n, k in t.log_powers]
        lines.append(' * '.join(parts))
    return '\n'.join(lines) + '\n'


_BINDINGS = re.compile(r'# bindings: d=(\S+) alpha=(\S+) beta=(\S+)')
_POWER = re.compile(r'(\w+)\^\((.*)\)')
_LOG = re.compile(r'ln(\w+)\^(\d+)')


def from_text(text):
    """Inverse of :func:`to_text`."""
    bindings = (0.0, 0.0, 0.0)
    note = ''
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith('#'):
            m = _BINDINGS.match(line)
            if m:
                bindings = tuple(float(g) for g in m.groups())
            elif line.startswith('# truncation:'):
                note = json.loads(line[len('# truncation:'):])
            continue
        head, *factors = line.split(' * ')
        exps, logs = {}, {}
        for factor in factors:
            m = _LOG.fullmatch(factor)
            if m and m.group(1) in SCALE_NAMES:
                logs[m.group(1)] = int(m.group(2))
                continue
            m = _POWER.fullmatch(factor)
            if m is None:
                raise ValueError('cannot parse factor {0!r}'.format(factor))
            exps[m.group(1)] = SymbolicExponent.parse(m.group(2))
        terms.append(Term.make(float(head), exps, logs))
    return FormalSeries(tuple(terms), note, bindings)


@dataclass(frozen=True)
class CommutationReport:
    lhs: float
    rhs: float
    residual: float
    passed: bool


def commutes_with_mass_derivative(p, s, h=1e-5, rtol=COMMUTATION_RTOL,
                                  n_max=None):
    """Check that extraction commutes with the mass derivative,

        alpha * E[I(alpha + 1)] = -d E[I(alpha)] / d m2,

    where E is the extraction operator over the scales of family `s`.  The
    derivative is a central difference with step h*m2.

    Returns
    -------
    CommutationReport
    """
    from loopreg import dimreg, schemes

    for q in (p, p.replace(alpha=p.alpha + 1)):
        verdict = dimreg.classify(q)
        if verdict.kind == 'pole':
            index = q.total_power - 0.5 * q.d
            raise PoleError('commutes_with_mass_derivative', round(index),
                            abs(index - round(index)))
        if verdict.kind == 'unsupported':
            raise DomainError(verdict.reason)
    if not p.m2 > 0:
        raise DomainError('the mass derivative needs m2 > 0')

    kwargs = {} if n_max is None else {'n_max': n_max}
    regulator = schemes.regulator_for(s, **kwargs)
    scales = s.scale_values

    def extracted(q):
        return eval_at(regulator.extract(q), scales)

    lhs = p.alpha * extracted(p.replace(alpha=p.alpha + 1))
    step = h * p.m2
    up = extracted(p.replace(m2=p.m2 + step))
    down = extracted(p.replace(m2=p.m2 - step))
    rhs = -(up - down) / (2 * step)
    residual = relative_residual(rhs, lhs, floor=1e-300)
    return CommutationReport(lhs, rhs, residual, residual <= rtol)


def _test():
    import doctest
    doctest.testmod()

if __name__ == "__main__":
    _test()
