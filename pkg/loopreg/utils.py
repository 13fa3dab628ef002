"""
Utility routines for the loopreg package.

Exceptions shared by every module, pole detection for the gamma-function
factors that appear in all closed forms, and the plain power-series
accumulator used by the special functions.

License: BSD-style (see LICENSE.txt in main source directory)
"""

import math

import numpy as np


__all__ = ['POLE_TOLERANCE',
           'Z_MARGIN',
           'SERIES_RTOL',
           'MAX_TERMS',
           'LoopRegError',
           'PoleError',
           'NonConvergence',
           'DomainError',
           'DivergentInput',
           'RecurrenceViolation',
           'pole_distance',
           'check_pole',
           'is_near_integer',
           'binomial',
           'sum_series',
           'relative_residual']


# Arguments closer than this to a non-positive integer count as poles.
POLE_TOLERANCE = 1e-8

# Distance from z = 1 below which the 2F1 power series is not attempted.
Z_MARGIN = 1e-6

SERIES_RTOL = 1e-16
MAX_TERMS = 10000

_EPS = np.finfo(float).eps


class LoopRegError(Exception):
    """Base class of the exceptions raised by loopreg.
    """
    def __init__(self, message):
        self.message = message
        Exception.__init__(self, message)

    def __str__(self):
        return str(self.message)


class PoleError(LoopRegError):
    """Exception raised when an argument sits on (or within
    POLE_TOLERANCE of) a pole of a gamma-function factor.

    Attributes
    ----------
    function : str
        Name of the function whose pole was hit.
    location : float
        The non-positive integer the argument is close to.
    distance : float
        Distance of the argument from `location`.
    """
    def __init__(self, function, location, distance, hint=None):
        self.function = function
        self.location = location
        self.distance = distance
        message = ('{0}: argument within {1:.3g} of the pole at {2:g}'
                   .format(function, distance, location))
        if hint:
            message += '; ' + hint
        LoopRegError.__init__(self, message)


class NonConvergence(LoopRegError):
    """Exception raised if a series or a quadrature exhausts its budget
    without meeting its tolerance.
    """


class DomainError(LoopRegError, ValueError):
    """Exception raised for inputs outside the domain of an operation.
    """


class DivergentInput(LoopRegError, ValueError):
    """Exception raised for inputs where the requested quantity is
    divergent and no continuation is offered.
    """


class RecurrenceViolation(LoopRegError):
    """Exception raised when the index-lowering recurrence fails its
    finite-difference check.
    """


def pole_distance(x):
    """Return (location, distance) of the nearest non-positive integer.
    """
    location = min(float(round(x)), 0.0)
    return location, abs(x - location)


def check_pole(function, x, tol=POLE_TOLERANCE, hint=None):
    """Raise PoleError if `x` lies within `tol` of a non-positive integer.
    """
    if not math.isfinite(x):
        raise DomainError('{0}: non-finite argument {1!r}'.format(function, x))
    location, distance = pole_distance(x)
    if distance < tol:
        raise PoleError(function, location, distance, hint=hint)


def is_near_integer(x, tol):
    return abs(x - round(x)) < tol


def binomial(s, n):
    """Generalized binomial coefficient C(s, n) for real s and integer
    n >= 0, in product form.

    >>> binomial(-1.0, 3)
    -1.0
    >>> binomial(4, 2)
    6.0
    """
    value = 1.0
    for i in range(n):
        value *= (s - i) / (i + 1)
    return value


def sum_series(first, ratio, name, max_terms=MAX_TERMS, rtol=SERIES_RTOL):
    """Sum a series whose terms obey t[n+1] = t[n] * ratio(n).

    Summation stops when the magnitude of the last included term drops
    below `rtol` times the partial sum (or a term vanishes exactly, which
    is how terminating hypergeometric series end).

    Parameters
    ----------
    first : float
        The n = 0 term.
    ratio : callable
        ratio(n) returns t[n+1] / t[n].
    name : str
        Used in the NonConvergence message.

    Returns
    -------
    total, abs_err : floats
        The partial sum and its error estimate: the last included term's
        magnitude plus accumulated rounding.
    """
    term = float(first)
    total = term
    magnitude = abs(term)
    n = 0
    while term != 0.0 and abs(term) >= rtol * abs(total):
        if n >= max_terms:
            raise NonConvergence('{0}: series not converged after {1} terms '
                                 '(last term {2:.3g}, sum {3:.3g})'
                                 .format(name, max_terms, term, total))
        term *= ratio(n)
        n += 1
        if not math.isfinite(term):
            raise NonConvergence('{0}: series term overflowed at n = {1}'
                                 .format(name, n))
        total += term
        magnitude += abs(term)
    return total, abs(term) + 4 * _EPS * magnitude


def relative_residual(value, reference, floor=0.0):
    """|value - reference| / |reference|, or the absolute difference if
    |reference| does not exceed `floor`.
    """
    diff = abs(value - reference)
    if abs(reference) <= floor or reference == 0.0:
        return diff
    return diff / abs(reference)


def _test():
    import doctest
    doctest.testmod()

if __name__ == "__main__":
    _test()
