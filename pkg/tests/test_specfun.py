""" Test functions for the special-function module.
"""

import math

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given, settings
from scipy import integrate, special

from loopreg import oracle, specfun
from loopreg.utils import DivergentInput, DomainError, PoleError


@pytest.mark.parametrize('x, expected', [
    (0.5, math.sqrt(math.pi)),
    (-0.5, -2 * math.sqrt(math.pi)),
    (5, 24.0),
])
def test_gamma_values(x, expected):
    g = specfun.gamma(x)
    assert np.isclose(g.value, expected, rtol=1e-14)
    assert g.abs_err < 1e-12 * abs(expected)


@pytest.mark.parametrize('x', [0, -1, -2, -3 + 1e-10])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        specfun.gamma(x)


def test_rgamma_vanishes_at_poles():
    assert specfun.rgamma(-2).value == 0.0
    assert np.isclose(specfun.rgamma(5).value, 1 / 24.0)


def test_pochhammer():
    assert specfun.pochhammer(0.3, 0) == 1.0
    assert specfun.pochhammer(1, 4) == 24.0
    assert specfun.pochhammer(-0.5, 2) == -0.25


def test_binomial_reciprocal_sum_terminating():
    # C(2, n)/(1 + n) summed: 1 + 2/2 + 1/3
    res = specfun.binomial_reciprocal_sum(-2, 1.0)
    assert np.isclose(res.value, 7 / 3, rtol=1e-14)


@pytest.mark.parametrize('x, y, expected', [
    (0.5, 0.5, math.pi),
    (1.5, -0.5, -math.pi),
    (1.6, 0.4, special.gamma(1.6) * special.gamma(0.4) / special.gamma(2.0)),
])
def test_beta_series_values(x, y, expected):
    assert np.isclose(specfun.beta_series(x, y).value, expected, rtol=1e-12)


@given(st.floats(min_value=0.1, max_value=6), st.floats(min_value=0.1,
                                                       max_value=6))
def test_beta_series_symmetric_and_gamma_ratio(x, y):
    b = specfun.beta_series(x, y)
    assert b.value == specfun.beta_series(y, x).value
    expected = math.exp(special.gammaln(x) + special.gammaln(y)
                        - special.gammaln(x + y))
    assert np.isclose(b.value, expected, rtol=1e-10)


def test_beta_series_pole():
    with pytest.raises(PoleError):
        specfun.beta_series(-1.0, 2.5)


@pytest.mark.parametrize('args, expected', [
    ((2, 2, 3, 0.0), 1.0),
    ((2, 2, 3, -1.0), 2 * math.log(2) - 1),
    # Euler integral with b = c - 1 = 1 done by hand
    ((0.5, 1, 2, 0.75), 4.0 / 3.0),
    ((0.5, 1, 2, -0.7), 2 * (1 - math.sqrt(1.7)) / -0.7),
])
def test_hyp2f1_values(args, expected):
    assert np.isclose(specfun.hyp2f1(*args).value, expected, rtol=1e-12)


def test_hyp2f1_large_negative_argument():
    z = -1e6
    f = specfun.hyp2f1(1.0, 1.5, 2.5, z)
    assert np.isclose(f.value, special.hyp2f1(1.0, 1.5, 2.5, z), rtol=1e-9)


@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=-3,
                                                       max_value=3),
       st.floats(min_value=-0.99, max_value=0.8))
def test_hyp2f1_symmetric(a, b, z):
    c = 2.75
    assert specfun.hyp2f1(a, b, c, z).value == specfun.hyp2f1(b, a, c,
                                                              z).value


def test_hyp2f1_rejects_z_near_one():
    with pytest.raises(DomainError):
        specfun.hyp2f1(0.5, 0.5, 2, 1.0)


def test_hyp1f1_exponential():
    assert np.isclose(specfun.hyp1f1(1.0, 1.0, 0.7).value, math.exp(0.7),
                      rtol=1e-14)


def test_tricomi_u_elementary():
    assert np.isclose(specfun.tricomi_u(1, 2, 3).value, 1 / 3, rtol=1e-12)


def test_tricomi_u_against_defining_integral():
    a, b, z = 1.5, 0.5, 0.01
    value, _ = integrate.quad(
        lambda t: math.exp(-z * t) * t ** (a - 1) * (1 + t) ** (b - a - 1),
        0, np.inf, epsabs=0, epsrel=1e-11, limit=500)
    expected = value / special.gamma(a)
    assert np.isclose(specfun.tricomi_u(a, b, z).value, expected, rtol=1e-7)


def test_tricomi_u_small_argument_limit():
    # U(a, a+1-alpha... ) pattern at d/2 = 1.5, alpha = 2.5
    u = specfun.tricomi_u(1.5, 0.0, 1e-6)
    assert np.isclose(u.value, 1 / special.gamma(2.5), rtol=1e-4)


def test_tricomi_u_integer_b_needs_positive_a():
    with pytest.raises(PoleError):
        specfun.tricomi_u(-1.0, 2.0, 0.5)


@pytest.mark.parametrize('omega, expected', [(2, 1.0), (3.5, 0.4)])
def test_expint_at_zero(omega, expected):
    assert np.isclose(specfun.expint(omega, 0).value, expected)


def test_expint_quadrature():
    omega, x = 1.7, 0.3
    expected, _ = integrate.quad(lambda t: math.exp(-x * t) * t ** (-omega),
                                 1, np.inf, epsrel=1e-12, limit=500)
    assert np.isclose(specfun.expint(omega, x).value, expected, rtol=1e-8)


def test_expint_divergent_at_zero():
    with pytest.raises(DivergentInput):
        specfun.expint(1.0, 0)


def test_bessel_k_half_order():
    expected = math.sqrt(math.pi / 4) * math.exp(-2)
    assert np.isclose(specfun.bessel_k(0.5, 2).value, expected, rtol=1e-12)
    assert specfun.bessel_k(-0.5, 2).value == specfun.bessel_k(0.5, 2).value


def test_bessel_k_small_argument():
    assert np.isclose(specfun.bessel_k(1.25, 0.1).value,
                      special.kv(1.25, 0.1), rtol=1e-9)


def test_appell_f1_reductions():
    assert np.isclose(specfun.appell_f1(1.5, 1, 1, 2.5, 0, 0).value, 1.0,
                      rtol=1e-12)
    assert np.isclose(specfun.appell_f1(1.5, 1, 1, 2.5, -4, -4).value,
                      specfun.hyp2f1(1.5, 2, 2.5, -4).value, rtol=1e-10)


def test_appell_f1_quadrature():
    a, b1, b2, c, v, w = 1.5, 1, 1, 2.5, -4, -9
    value, _ = integrate.quad(
        lambda x: (x ** (a - 1) * (1 - x) ** (c - a - 1)
                   * (1 - x * v) ** (-b1) * (1 - x * w) ** (-b2)),
        0, 1, epsrel=1e-12)
    expected = value * special.gamma(c) / (special.gamma(a)
                                           * special.gamma(c - a))
    assert np.isclose(specfun.appell_f1(a, b1, b2, c, v, w).value, expected,
                      rtol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-2.5, max_value=2.5).filter(
    lambda x: abs(x - round(x)) > 0.05 or x > 0.5))
def test_gamma_recurrence(x):
    assert np.isclose(specfun.gamma(x + 1).value,
                      x * specfun.gamma(x).value, rtol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.99))
def test_gamma_reflection(x):
    product = (specfun.gamma(x).value * specfun.gamma(1 - x).value
               * math.sin(math.pi * x) / math.pi)
    assert np.isclose(product, 1.0, rtol=1e-10)


@pytest.mark.parametrize('b', [0.5, 2.0])
@pytest.mark.parametrize('z', [1e-4, 1e-2, 1.0, 10.0])
def test_tricomi_u_grid(b, z):
    a = 1.5
    u = specfun.tricomi_u(a, b, z)
    ref = oracle.integrate(
        lambda t: math.exp(-z * t) * t ** (a - 1) * (1 + t) ** (b - a - 1),
        0.0, decay='exponential', scale=1.0 / z, rel_tol=1e-11)
    expected = ref.value / math.gamma(a)
    allowance = 10 * u.abs_err + ref.err_est / math.gamma(a)
    assert abs(u.value - expected) <= max(1e-8 * abs(expected), allowance)


def test_tricomi_u_large_argument():
    # z^a U(a, b, z) -> 1 with correction -a(a-b+1)/z
    a, b, z = 1.5, 0.5, 200.0
    scaled = z ** a * specfun.tricomi_u(a, b, z).value
    assert abs(scaled - (1 - a * (a - b + 1) / z)) < 5 * (a * (a + 1)
                                                          * (a - b + 1)
                                                          * (a - b + 2)
                                                          / (2 * z * z))


def test_expint_derivative():
    omega, x, h = 2.5, 0.7, 1e-5
    derivative = (specfun.expint(omega, x + h).value
                  - specfun.expint(omega, x - h).value) / (2 * h)
    assert np.isclose(derivative, -specfun.expint(omega - 1, x).value,
                      rtol=1e-6)
