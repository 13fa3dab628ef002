""" Test functions for the regulated integral families.
"""

import math

import numpy as np
import pytest

from loopreg import dimreg, oracle, schemes, series, specfun
from loopreg.base import EvalResult, Params, SchemeSpec
from loopreg.utils import DivergentInput, DomainError, PoleError


def cutoff(K):
    return SchemeSpec('cutoff_uv', K=K)


def gauss(delta):
    return SchemeSpec('gaussian_uv', delta=delta)


def window(K):
    return SchemeSpec('ir_window', K=K)


def two_sided(delta):
    return SchemeSpec('two_sided_gaussian', delta=delta)


def extracted_value(s):
    return series.eval_at(series.extract_multi(s, ('K', 'delta', 'xi')))


# SchemeSpec validation

@pytest.mark.parametrize('kwargs', [
    dict(family='cutoff_uv'),
    dict(family='cutoff_uv', K=10, delta=0.1),
    dict(family='cutoff_uv', K=-1),
    dict(family='ir_window', K=0.5),
    dict(family='separate_cutoff', K=1, delta=2),
    dict(family='dimensional'),
])
def test_bad_specs(kwargs):
    with pytest.raises(DomainError):
        SchemeSpec(**kwargs)


def test_regulator_for():
    reg = schemes.regulator_for(gauss(0.1), n_max=10)
    assert isinstance(reg, schemes.GaussianRegulator)
    assert reg.scales == ('delta',)
    with pytest.raises(DomainError):
        schemes.CutoffRegulator(gauss(0.1))


# Sharp cut-off

def test_cutoff_closed_form():
    res = schemes.cutoff_eval(Params(d=3, alpha=1, m2=1), cutoff(10))
    assert isinstance(res, EvalResult)
    expected = (10 - math.atan(10)) / (2 * math.pi ** 2)
    assert np.isclose(res.value, expected, rtol=1e-10)


def test_cutoff_log_case():
    res = schemes.cutoff_eval(Params(d=4, alpha=2, m2=1), cutoff(1))
    expected = 0.5 * oracle.radial_measure(4) * dimreg.log_case_radial(1)[0]
    assert np.isclose(res.value, expected, rtol=1e-10)


@pytest.mark.parametrize('K', [2, 10, 100, 1e4])
@pytest.mark.parametrize('d', [3, 3.7])
@pytest.mark.parametrize('alpha', [-2, -1, -0.5, 0, 0.3, 1, 2, 2.6, 2.7, 3])
def test_cutoff_finite_for_any_alpha(alpha, d, K):
    p = Params(d=d, alpha=alpha, m2=1)
    value = schemes.cutoff_eval(p, cutoff(K)).value
    assert np.isfinite(value)
    assert np.isclose(value, oracle.scheme_oracle(p, cutoff(K)).value,
                      rtol=1e-8)


@pytest.mark.parametrize('K', [10, 100, 1e4])
def test_cutoff_squared_propagator(K):
    res = schemes.cutoff_eval(Params(d=3, alpha=2, m2=1), cutoff(K))
    expected = (math.atan(K) - K / (1 + K * K)) / (4 * math.pi ** 2)
    assert np.isclose(res.value, expected, rtol=1e-10)
    assert res.abs_err < 1e-9 * expected


@pytest.mark.parametrize('K', [1e2, 1e4])
def test_window_at_grid_corner(K):
    p = Params(d=3.7, alpha=2.6, m2=0.5)
    value = schemes.ir_window_eval(p, window(K)).value
    assert np.isclose(value, oracle.scheme_oracle(p, window(K)).value,
                      rtol=1e-8)


def test_cutoff_massless():
    res = schemes.cutoff_eval(Params(d=3, alpha=1, m2=0), cutoff(10))
    assert np.isclose(res.value, 10 * oracle.radial_measure(3), rtol=1e-14)
    with pytest.raises(DivergentInput):
        schemes.cutoff_eval(Params(d=3, alpha=2, m2=0), cutoff(10))


def test_cutoff_series():
    p = Params(d=3, alpha=1, m2=1)
    s = schemes.cutoff_series(p, cutoff(1e4), n_max=20)
    assert np.isclose(series.eval_at(s, {'K': 1e4}),
                      schemes.cutoff_eval(p, cutoff(1e4)).value, rtol=1e-10)
    assert np.isclose(s.scale_free_value(), -1 / (4 * math.pi), rtol=1e-14)


def test_cutoff_series_pole():
    with pytest.raises(PoleError):
        schemes.cutoff_series(Params(d=4, alpha=2, m2=1), cutoff(100))


def test_cutoff_series_needs_large_K():
    with pytest.raises(DomainError):
        schemes.cutoff_series(Params(d=3, alpha=1, m2=4), cutoff(1))


def test_cutoff_large_K_limit():
    p = Params(d=3, alpha=2, m2=1)
    master = dimreg.master_one_loop(p).value
    gaps = [schemes.cutoff_eval(p, cutoff(K)).value - master
            for K in (1e3, 2e3)]
    # gap ~ K^(d - 2 alpha)
    assert np.isclose(gaps[0] / gaps[1], 2.0, rtol=1e-4)


# Gaussian damping

def test_gaussian_small_delta_limit():
    p = Params(d=3, alpha=2, m2=1)
    target = 1 / (8 * math.pi)
    gaps = [abs(schemes.gaussian_eval(p, gauss(delta)).value - target)
            for delta in (1e-2, 1e-4, 1e-6)]
    assert gaps[0] > gaps[1] > gaps[2]
    # leading correction is -4 (4 pi)^(-3/2) sqrt(delta)
    assert gaps[2] / target < 5e-3


@pytest.mark.parametrize('alpha', [-2, -0.5, 0.3, 1, 2.7])
def test_gaussian_against_oracle(alpha):
    p = Params(d=3, alpha=alpha, m2=1)
    value = schemes.gaussian_eval(p, gauss(0.1)).value
    assert np.isclose(value, oracle.scheme_oracle(p, gauss(0.1)).value,
                      rtol=1e-8)


def test_gaussian_massless():
    p = Params(d=3, alpha=1, m2=0)
    res = schemes.gaussian_eval(p, gauss(0.25))
    expected = 0.5 * oracle.radial_measure(3) * specfun.gamma(0.5).value * 2
    assert np.isclose(res.value, expected, rtol=1e-13)
    with pytest.raises(DivergentInput):
        schemes.gaussian_eval(Params(d=3, alpha=2, m2=0), gauss(0.25))


def test_gaussian_series():
    p = Params(d=3, alpha=1, m2=1)
    s = schemes.gaussian_series(p, gauss(1e-4), n_max=10)
    assert np.isclose(series.eval_at(s, {'delta': 1e-4}),
                      schemes.gaussian_eval(p, gauss(1e-4)).value, rtol=1e-6)
    assert np.isclose(s.scale_free_value(), -1 / (4 * math.pi), rtol=1e-14)
    # first integer-power correction relative to the master integral is
    # d m2 / (d + 2 - 2 alpha)
    first = [t.coeff for t in s.terms
             if t.scale_exponents == (('delta',
                                       series.SymbolicExponent(1)),)]
    assert np.isclose(first[0] / s.scale_free_value(), 1.0, rtol=1e-13)


def test_gaussian_series_pole():
    with pytest.raises(PoleError):
        schemes.gaussian_series(Params(d=4, alpha=2, m2=1), gauss(1e-3))


# Two propagators

def test_two_mass_cutoff():
    p = Params(d=3, alpha=1, beta=1, m2=1, M2=4)
    s = cutoff(1e3)
    value, expansion = schemes.two_mass_cutoff(p, s)
    assert np.isclose(value.value, oracle.scheme_oracle(p, s).value,
                      rtol=1e-8)
    assert np.isclose(expansion.scale_free_value(),
                      dimreg.two_mass_master(p).value, rtol=1e-14)
    assert np.isclose(series.eval_at(expansion, {'K': 1e3}), value.value,
                      rtol=1e-8)


def test_two_mass_cutoff_equal_masses():
    p = Params(d=3, alpha=1, beta=1, m2=1, M2=1)
    value, _ = schemes.two_mass_cutoff(p, cutoff(50))
    merged = schemes.cutoff_eval(Params(d=3, alpha=2, m2=1), cutoff(50))
    assert np.isclose(value.value, merged.value, rtol=1e-9)


def test_two_mass_gaussian():
    p = Params(d=3, alpha=1, beta=1, m2=1, M2=4)
    s = gauss(1e-3)
    value, expansion = schemes.two_mass_gaussian(p, s)
    assert value.provenance == 'quadrature'
    assert np.isclose(expansion.scale_free_value(),
                      dimreg.two_mass_master(p).value, rtol=1e-8)
    assert np.isclose(series.eval_at(expansion, {'delta': 1e-3}),
                      value.value, rtol=1e-6)


def test_two_mass_gaussian_without_second_propagator():
    p = Params(d=3, alpha=1, beta=0, m2=1, M2=4)
    value, _ = schemes.two_mass_gaussian(p, gauss(1e-2))
    single = schemes.gaussian_eval(Params(d=3, alpha=1, m2=1), gauss(1e-2))
    assert value.value == single.value


# Infrared windows

def test_window_massless():
    p = Params(d=3, alpha=1, m2=0)
    value = schemes.ir_window_eval(p, window(10)).value
    expected = 19.8 / (4 * math.pi) ** 1.5
    assert np.isclose(value * specfun.gamma(1.5).value, expected, rtol=1e-12)
    assert np.isclose(value, oracle.scheme_oracle(p, window(10)).value,
                      rtol=1e-9)


def test_window_massive_is_cutoff_difference():
    p = Params(d=3, alpha=1, m2=1)
    value = schemes.ir_window_eval(p, window(10)).value
    difference = (schemes.cutoff_eval(p, cutoff(10)).value
                  - schemes.cutoff_eval(p, cutoff(0.1)).value)
    assert value == difference
    assert np.isclose(value, oracle.scheme_oracle(p, window(10)).value,
                      rtol=1e-9)


def test_window_empty_and_pole():
    res = schemes.ir_window_eval(Params(d=3, alpha=1, m2=1), window(1))
    assert res.value == 0.0
    with pytest.raises(PoleError):
        schemes.ir_window_eval(Params(d=3, alpha=1.5, m2=0), window(10))


def test_window_series():
    p = Params(d=3, alpha=1, m2=1)
    s = schemes.ir_window_series(p, window(10))
    assert np.isclose(series.eval_at(s, {'K': 10.0}),
                      schemes.ir_window_eval(p, window(10)).value, rtol=1e-10)
    assert np.isclose(extracted_value(s), -1 / (4 * math.pi), rtol=1e-14)
    massless = schemes.ir_window_series(Params(d=3, alpha=1, m2=0),
                                        window(10))
    assert extracted_value(massless) == 0.0


def test_separate_cutoff():
    p = Params(d=3, alpha=1, m2=1)
    s = SchemeSpec('separate_cutoff', K=10, delta=0.1)
    value = schemes.separate_cutoff_eval(p, s).value
    assert value == schemes.ir_window_eval(p, window(10)).value
    expansion = schemes.separate_cutoff_series(p, s)
    assert np.isclose(series.eval_at(expansion, s.scale_values), value,
                      rtol=1e-10)
    assert np.isclose(extracted_value(expansion), -1 / (4 * math.pi),
                      rtol=1e-14)


def test_separate_cutoff_massless():
    p = Params(d=3, alpha=1, m2=0)
    s = SchemeSpec('separate_cutoff', K=10, delta=0.1)
    value = schemes.separate_cutoff_eval(p, s).value
    assert np.isclose(value * specfun.gamma(1.5).value,
                      19.8 / (4 * math.pi) ** 1.5, rtol=1e-12)
    expansion = schemes.separate_cutoff_series(p, s)
    assert extracted_value(expansion) == 0.0


def test_gaussian_ir():
    p = Params(d=3, alpha=2, m2=1)
    s = SchemeSpec('gaussian_ir', delta=0.01)
    value = schemes.gaussian_ir_eval(p, s).value
    assert np.isclose(schemes.gaussian_ir_decomposition(p, s).value, value,
                      rtol=1e-8)
    expansion = schemes.gaussian_ir_series(p, s)
    assert np.isclose(series.eval_at(expansion, {'delta': 0.01}), value,
                      rtol=1e-7)
    assert np.isclose(extracted_value(expansion), 1 / (8 * math.pi),
                      rtol=1e-14)


def test_gaussian_ir_massless_series():
    p = Params(d=3, alpha=2, m2=0)
    s = SchemeSpec('gaussian_ir', delta=0.1)
    expansion = schemes.gaussian_ir_series(p, s)
    assert np.isclose(series.eval_at(expansion, {'delta': 0.1}),
                      schemes.gaussian_ir_eval(p, s).value, rtol=1e-8)
    assert extracted_value(expansion) == 0.0


def test_gaussian_ir_u_candidates():
    report = schemes.gaussian_ir_u_candidates(
        Params(d=3, alpha=2, m2=0), SchemeSpec('gaussian_ir', delta=0.1))
    assert report.residual_shifted < 1e-8
    assert report.residual_unshifted > 1e-3


# Two-sided damping

@pytest.mark.parametrize('d', [2.5, 3, 3.5])
@pytest.mark.parametrize('alpha', [0.7, 1, 1.8])
@pytest.mark.parametrize('delta', [0.1, 1])
def test_two_sided_massless_closed_form(d, alpha, delta):
    p = Params(d=d, alpha=alpha, m2=0)
    s = two_sided(delta)
    closed = schemes.two_sided_massless_closed_form(p, s).value
    assert np.isclose(closed, schemes.two_sided_eval(p, s).value, rtol=1e-8)


def test_two_sided_bessel_value():
    p = Params(d=3, alpha=1, m2=0)
    closed = schemes.two_sided_massless_closed_form(p, two_sided(1)).value
    expected = (oracle.radial_measure(3) * math.sqrt(math.pi / 4)
                * math.exp(-2))
    assert np.isclose(closed, expected, rtol=1e-12)


def test_two_sided_equal_scales_match():
    p = Params(d=3, alpha=1, m2=1)
    separate = SchemeSpec('separate_two_sided', delta=0.3, xi=0.3)
    assert (schemes.two_sided_eval(p, separate).value
            == schemes.two_sided_eval(p, two_sided(0.3)).value)


def test_two_sided_prefactor_report():
    p = Params(d=3, alpha=1, m2=0)
    report = schemes.two_sided_prefactor_report(
        p, SchemeSpec('separate_two_sided', delta=0.5, xi=2))
    assert report.residual_standard < 1e-8
    assert report.residual_displayed > 1e-3


def test_two_sided_series():
    p = Params(d=3, alpha=1, m2=1)
    s = two_sided(1e-2)
    expansion = schemes.two_sided_series(p, s)
    assert expansion.terms
    assert all(t.scales() <= {'delta'} for t in expansion.terms)
    assert np.isclose(series.eval_at(expansion, {'delta': 1e-2}),
                      schemes.two_sided_eval(p, s).value, rtol=1e-6)
    assert np.isclose(extracted_value(expansion), -1 / (4 * math.pi),
                      rtol=1e-10)


def test_two_sided_massless_series():
    p = Params(d=3, alpha=1, m2=0)
    s = SchemeSpec('separate_two_sided', delta=0.5, xi=2)
    expansion = schemes.two_sided_series(p, s)
    assert np.isclose(series.eval_at(expansion, s.scale_values),
                      schemes.two_sided_eval(p, s).value, rtol=1e-8)
    assert extracted_value(expansion) == 0.0


# Demonstration regulators

def test_quartic_demo():
    p = Params(d=3, alpha=1)
    s = SchemeSpec('quartic_demo', a=0.01)
    value = schemes.incomplete_demo('quartic', p, s).value
    assert np.isclose(value, oracle.scheme_oracle(p, s).value, rtol=1e-8)
    target = schemes.demo_continuation_target(p)
    assert np.isclose(target, -0.5 * math.pi, rtol=1e-12)
    small = schemes.incomplete_demo('quartic', p,
                                    SchemeSpec('quartic_demo', a=1e-6))
    assert small.value > 0 > target


def test_mellin_demo():
    p = Params(d=3, alpha=2)
    res = schemes.incomplete_demo('mellin', p,
                                  SchemeSpec('mellin_demo', z=0.1))
    expected = (specfun.gamma(1.6).value * specfun.gamma(0.4).value
                / specfun.gamma(2.0).value)
    assert res.provenance == 'demo'
    assert np.isclose(res.value, expected, rtol=1e-10)


@pytest.mark.parametrize('kind, spec', [
    ('mellin', SchemeSpec('mellin_demo', z=0.1)),
    ('quartic', SchemeSpec('quartic_demo', a=0.01)),
])
def test_demos_fail_for_non_positive_alpha(kind, spec):
    for alpha in (0, -1):
        with pytest.raises(DivergentInput):
            schemes.incomplete_demo(kind, Params(d=3, alpha=alpha), spec)


def test_demo_errors():
    with pytest.raises(ValueError):
        schemes.incomplete_demo('cubic', Params(d=3, alpha=1),
                                SchemeSpec('quartic_demo', a=0.01))
    with pytest.raises(DomainError):
        schemes.incomplete_demo('quartic', Params(d=2.5, alpha=1),
                                SchemeSpec('quartic_demo', a=0.01))
