"""
Parameter records, regulator specifications, evaluation results and the
abstract base class shared by every regulated integral family.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import math
import numbers
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass, asdict, replace
from typing import Optional

from sklearn.utils import check_scalar

from loopreg import oracle, series
from loopreg.utils import DomainError, NonConvergence


__all__ = ['FAMILIES',
           'SERIES_SCALES',
           'PROVENANCES',
           'DEFAULT_N_MAX',
           'TRUNCATION_LIMIT',
           'Params',
           'SchemeSpec',
           'EvalResult',
           'BaseRegulator']


# Regulator scales required by each family, in a fixed order.
FAMILIES = {
    'cutoff_uv': ('K',),
    'gaussian_uv': ('delta',),
    'ir_window': ('K',),
    'gaussian_ir': ('delta',),
    'two_sided_gaussian': ('delta',),
    'separate_cutoff': ('K', 'delta'),
    'separate_two_sided': ('delta', 'xi'),
    'mellin_demo': ('z',),
    'quartic_demo': ('a',),
}

# Scales that may tag series terms.
SERIES_SCALES = ('K', 'delta', 'xi')

PROVENANCES = ('closed_form', 'series', 'quadrature', 'demo')

DEFAULT_N_MAX = 40

# A truncated series is rejected if its last included term exceeds this
# fraction of the running total.
TRUNCATION_LIMIT = 1e-3


def _checked(value, name, **bounds):
    try:
        return float(check_scalar(value, name, numbers.Real, **bounds))
    except (TypeError, ValueError) as e:
        raise DomainError(str(e))


@dataclass(frozen=True)
class Params:
    """Indices and masses of a one-loop integral.

    Parameters
    ----------
    d : float
        Dimension. Values d <= 0 are accepted here and classified as
        `unsupported` by :func:`loopreg.dimreg.classify`.
    alpha : float
        Power of the first propagator (p^2 + m2).
    m2 : float (default 1.0)
        Squared mass of the first propagator, >= 0.
    beta : float or None
        Power of the second propagator (p^2 + M2); None or 0 means a
        single propagator.
    M2 : float or None
        Squared mass of the second propagator.
    """
    d: float
    alpha: float
    m2: float = 1.0
    beta: Optional[float] = None
    M2: Optional[float] = None

    def __post_init__(self):
        for name in ('d', 'alpha', 'm2'):
            value = getattr(self, name)
            if not isinstance(value, numbers.Real) or not math.isfinite(value):
                raise DomainError('{0} must be a finite real, got {1!r}'
                                  .format(name, value))
        if self.m2 < 0:
            raise DomainError('m2 must be non-negative')
        if self.M2 is not None and self.M2 < 0:
            raise DomainError('M2 must be non-negative')

    @property
    def two_mass(self):
        """True if a second propagator with nonzero power is present."""
        return self.beta is not None and self.beta != 0

    @property
    def total_power(self):
        return self.alpha + (self.beta or 0.0)

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SchemeSpec:
    """A regulated family together with its regulator scales.

    Exactly the scales listed for `family` in FAMILIES must be set; all
    other scale fields must be None.
    """
    family: str
    K: Optional[float] = None
    delta: Optional[float] = None
    xi: Optional[float] = None
    z: Optional[float] = None
    a: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError('scheme family {0!r} not understood'
                              .format(self.family))
        required = FAMILIES[self.family]
        for name in ('K', 'delta', 'xi', 'z', 'a'):
            value = getattr(self, name)
            if name in required and value is None:
                raise DomainError('{0} requires {1}'.format(self.family, name))
            if name not in required and value is not None:
                raise DomainError('{0} does not take {1}'
                                  .format(self.family, name))
            if value is None:
                continue
            if name == 'z':
                value = _checked(value, name)
            else:
                value = _checked(value, name, min_val=0.0,
                                 include_boundaries='neither')
            if not math.isfinite(value):
                raise DomainError('{0} must be finite'.format(name))
            object.__setattr__(self, name, value)
        if self.family == 'ir_window' and self.K < 1:
            raise DomainError('ir_window needs K >= 1 so that 1/K <= K')
        if self.family == 'separate_cutoff' and not self.K > self.delta:
            raise DomainError('separate_cutoff needs K > delta')

    @property
    def scale_values(self):
        """Regulator scales that can tag series terms, keyed by name."""
        return {name: getattr(self, name) for name in SERIES_SCALES
                if getattr(self, name) is not None}

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class EvalResult:
    """A numeric value with an absolute error estimate and its provenance.
    """
    value: float
    abs_err: float
    provenance: str
    note: str = ''

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError('provenance {0!r} not understood'
                             .format(self.provenance))
        if not (self.abs_err >= 0 and math.isfinite(self.abs_err)):
            raise ValueError('abs_err must be finite and non-negative')

    @property
    def rel_err(self):
        if self.value == 0:
            return self.abs_err
        return self.abs_err / abs(self.value)

    def __float__(self):
        return float(self.value)


class BaseRegulator(metaclass=ABCMeta):
    """A base class providing generic functionality for the regulated
    integral families.  Cannot be instantiated.

    Parameters
    ----------
    spec : SchemeSpec
        Family and regulator scales. The family must be one of the
        subclass's `families`.

    n_max : int (default 40)
        Number of terms kept per summation index in series forms.

    rel_tol : float (default 1e-10)
        Relative tolerance of the oracle quadratures.

    verbose : int, (default=0)
        Enable verbose output.
    """

    families = ()

    def __init__(self, spec, *, n_max=DEFAULT_N_MAX,
                 rel_tol=oracle.DEFAULT_RTOL, verbose=0):
        if spec.family not in self.families:
            raise DomainError('{0} does not handle family {1!r}'
                              .format(type(self).__name__, spec.family))
        if n_max < 1:
            raise DomainError('n_max must be at least 1')
        self.spec = spec
        self.n_max = int(n_max)
        self.rel_tol = rel_tol
        self.verbose = verbose

    @property
    def scales(self):
        """Scales removed by the extraction operator of this family."""
        return tuple(self.spec.scale_values)

    @abstractmethod
    def evaluate(self, params):
        """Numeric value of the regulated integral at `params`.

        Returns
        -------
        EvalResult
        """

    def expand(self, params):
        """Scale-tagged series of the regulated integral.

        Returns
        -------
        FormalSeries
        """
        raise DomainError('family {0} has no series form'
                          .format(self.spec.family))

    def oracle(self, params):
        """Brute-force quadrature of the defining integral."""
        return oracle.scheme_oracle(params, self.spec, tol=self.rel_tol)

    def extract(self, params):
        """Apply the extraction operator over all of this family's scales.
        """
        return series.extract_multi(self.expand(params), self.scales)

    def _log(self, level, message):
        if self.verbose >= level:
            print(message)

    def _check_truncation(self, last_term, total, what):
        """Reject a truncated sum whose final term is not yet small."""
        if abs(last_term) > TRUNCATION_LIMIT * abs(total):
            raise NonConvergence(
                '{0}: last included term {1:.3g} exceeds {2:g} of the total '
                '{3:.3g}; increase n_max or move deeper into the asymptotic '
                'regime'.format(what, last_term, TRUNCATION_LIMIT, total))
