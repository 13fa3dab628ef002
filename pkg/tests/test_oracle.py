""" Test functions for the quadrature oracle.
"""

import math
from concurrent import futures

import numpy as np
import pytest

from loopreg import oracle, specfun
from loopreg.base import Params, SchemeSpec
from loopreg.utils import DomainError, NonConvergence


def test_integrate_finite_interval():
    res = oracle.integrate(lambda t: t, 0.0, 1.0)
    assert res.converged
    assert np.isclose(res.value, 0.5, rtol=1e-12)


def test_integrate_exponential_tail():
    res = oracle.integrate(lambda t: math.exp(-t), 0.0, decay='exponential')
    assert np.isclose(res.value, 1.0, rtol=1e-10)


def test_integrate_gaussian_tail():
    res = oracle.integrate(lambda t: math.exp(-t * t), 0.0, decay='gaussian')
    assert np.isclose(res.value, 0.5 * math.sqrt(math.pi), rtol=1e-10)


def test_integrate_power_tail():
    res = oracle.integrate(lambda t: 1.0 / (1 + t * t), 0.0, decay='power')
    assert np.isclose(res.value, 0.5 * math.pi, rtol=1e-10)


def test_integrate_with_breakpoint():
    res = oracle.integrate(lambda p: p * p / (p * p + 1), 0.0, 10.0,
                           points=(1.0,))
    assert np.isclose(res.value, 10 - math.atan(10), rtol=1e-12)


def test_request_validation():
    with pytest.raises(DomainError):
        oracle.QuadratureRequest(lambda t: t, 0.0)
    with pytest.raises(DomainError):
        oracle.QuadratureRequest(lambda t: t, 1.0, 0.0)
    with pytest.raises(DomainError):
        oracle.QuadratureRequest(lambda t: t, 0.0, 1.0, rel_tol=0.0)


def test_unconverged_result():
    kwargs = dict(rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=1)
    res = oracle.integrate(lambda t: math.sin(200 * t), 0.0, 10.0,
                           strict=False, **kwargs)
    assert not res.converged
    with pytest.raises(NonConvergence):
        oracle.integrate(lambda t: math.sin(200 * t), 0.0, 10.0, **kwargs)


@pytest.mark.filterwarnings('error')
def test_unconverged_result_emits_no_warning():
    res = oracle.integrate(lambda t: math.sin(200 * t), 0.0, 10.0,
                           strict=False, rel_tol=1e-14, abs_tol=1e-300,
                           max_subdivisions=1)
    assert not res.converged


def test_integrate_concurrently():
    def work(k):
        return oracle.integrate(lambda t: t ** k, 0.0, 1.0).value

    with futures.ThreadPoolExecutor(max_workers=4) as pool:
        values = list(pool.map(work, range(8)))
    assert np.allclose(values, [1.0 / (k + 1) for k in range(8)], rtol=1e-12)


@pytest.mark.parametrize('d, expected', [
    (3, 1 / (2 * math.pi ** 2)),
    (2, 1 / (2 * math.pi)),
    (1, 1 / math.pi),
])
def test_radial_measure(d, expected):
    assert np.isclose(oracle.radial_measure(d), expected, rtol=1e-14)


def test_radial_measure_needs_positive_d():
    with pytest.raises(DomainError):
        oracle.radial_measure(0)


def test_oracle_unregulated():
    res = oracle.scheme_oracle(Params(d=3, alpha=2, m2=1))
    assert np.isclose(res.value, 1 / (8 * math.pi), rtol=1e-10)


def test_oracle_cutoff():
    res = oracle.scheme_oracle(Params(d=3, alpha=1, m2=1),
                               SchemeSpec('cutoff_uv', K=10))
    expected = (10 - math.atan(10)) / (2 * math.pi ** 2)
    assert np.isclose(res.value, expected, rtol=1e-10)


def test_oracle_two_sided_massless():
    p = Params(d=3, alpha=1, m2=0)
    res = oracle.scheme_oracle(p, SchemeSpec('two_sided_gaussian', delta=1))
    expected = oracle.radial_measure(3) * specfun.bessel_k(0.5, 2).value
    assert np.isclose(res.value, expected, rtol=1e-9)


def test_oracle_empty_window():
    res = oracle.scheme_oracle(Params(d=3, alpha=1),
                               SchemeSpec('ir_window', K=1))
    assert res.value == 0.0


def test_oracle_demo_is_unscaled():
    res = oracle.scheme_oracle(Params(d=3, alpha=2),
                               SchemeSpec('mellin_demo', z=0.1))
    expected = (specfun.gamma(1.6).value * specfun.gamma(0.4).value
                / specfun.gamma(2.0).value)
    assert np.isclose(res.value, expected, rtol=1e-9)
