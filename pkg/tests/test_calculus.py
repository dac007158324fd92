import json
import math
from fractions import Fraction

import numpy as np
import pytest

from parablow import ModelParams
from parablow.calculus import (
    EXPANSIONS,
    ExpansionName,
    Inequality,
    TestFunctionSampler,
    check_expansion,
    check_interpolation,
    check_sigma_constraints,
    evaluate_expansion,
    interpolation_ratio,
    relative_residual,
    scan_sigma_constraints,
    sigma_step_consistency,
)
from parablow.exceptions import DegreeBudgetExceeded


def _x(n):
    return -np.pi + np.arange(n) * (2 * np.pi / n)


@pytest.fixture(scope="module")
def sampler():
    return TestFunctionSampler(seed=0, max_degree=5)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_f_constant_eta_exact(alpha):
    x = _x(16)
    lhs, terms, scale = evaluate_expansion("F", ModelParams(alpha, 1, 1), np.ones(16), np.sin(x))
    assert relative_residual(lhs, terms, scale) < 1e-12


def test_f_alpha2_random(sampler):
    rep = check_expansion("F", ModelParams(2, 1, 1), sampler, trials=100, n=512)
    assert rep.max_residual < 1e-8


def test_g_alpha_beta_1(sampler):
    assert check_expansion("G", ModelParams(1, 1, 1), sampler, trials=100, n=512).max_residual < 1e-8


@pytest.mark.parametrize(
    "name,alpha,beta,n_sigma",
    [
        ("G", 2, 2, 2),
        ("G", 1, 2, 2),
        ("OMEGA_XX", 1, 1, 2),
        ("OMEGA_XX", 2, 2, 2),
        ("V_X", 2, 1, 2),
        ("SIGMA_SYSTEM", 1, 1, 2),
        ("SIGMA_SYSTEM", 2, 1, 3),
        ("SIGMA_DDV", 1, 1, 2),
        ("SIGMA_DDV", 1, 1, 3),
    ],
)
def test_other_expansions(sampler, name, alpha, beta, n_sigma):
    rep = check_expansion(name, ModelParams(alpha, beta, 0.7), sampler, trials=30, n=512, n_sigma=n_sigma)
    assert rep.max_residual < 1e-8


def test_wrong_term_detected(sampler):
    # dropping one term must break the identity by far more than round-off
    x = _x(256)
    rng = sampler.trial_rngs(1)[0]
    u, v = sampler.positive(x, rng), sampler.zero_mean(x, rng)
    lhs, terms, scale = evaluate_expansion("G", ModelParams(1, 1, 1), u, v)
    assert relative_residual(lhs, terms[:-1], scale) > 1e-3


def test_zero_coefficient_forms_no_power():
    # f1 carries eta^(2 alpha - 3): at alpha = 1 its coefficient vanishes and eta = 0 must not be raised to -1
    x = _x(64)
    with np.errstate(all="raise"):
        lhs, terms, scale = evaluate_expansion("F", ModelParams(1, 1, 1), 1 - np.cos(x), np.sin(x))
    assert np.all(np.isfinite(terms[0])) and np.max(np.abs(terms[0])) == 0.0
    assert relative_residual(lhs, terms, scale) < 1e-10


def test_degree_budget():
    with pytest.raises(DegreeBudgetExceeded):
        check_expansion("F", ModelParams(2, 1, 1), TestFunctionSampler(max_degree=40), trials=1, n=64)
    # exactly at the budget is allowed
    check_expansion("V_X", ModelParams(1, 1, 1), TestFunctionSampler(max_degree=8), trials=1, n=48)


def test_residual_is_roundoff_not_truncation(sampler):
    # no dependence on dx once dealiased: both resolutions sit at round-off
    for name in ("F", "G", "SIGMA_DDV"):
        a = check_expansion(name, ModelParams(2, 1, 1), sampler, trials=10, n=256).max_residual
        b = check_expansion(name, ModelParams(2, 1, 1), sampler, trials=10, n=512).max_residual
        assert max(a, b) < 1e-8


def test_seed_reproducible(sampler):
    a = check_expansion("G", ModelParams(1, 1, 1), sampler, trials=5, n=256)
    b = check_expansion("G", ModelParams(1, 1, 1), TestFunctionSampler(seed=0, max_degree=5), trials=5, n=256)
    assert a.residuals == b.residuals


def test_sampler_floor():
    s = TestFunctionSampler(seed=3, max_degree=10, floor=0.25)
    x = _x(128)
    for rng in s.trial_rngs(50):
        assert np.min(s.positive(x, rng)) >= 0.25
        assert abs(np.mean(s.zero_mean(x, rng))) < 1e-14


def test_all_cases_registered():
    assert set(EXPANSIONS) == set(ExpansionName)


@pytest.mark.parametrize("n_sigma,alpha,beta", [(2, 1, 1), (3, 2, 2)])
def test_sigma_step_second_order(sampler, n_sigma, alpha, beta):
    dts = [1e-3, 5e-4, 2.5e-4]
    errs = sigma_step_consistency(ModelParams(alpha, beta, 1), sampler, n_sigma, dts)
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) > 1.8


def test_h2_single_mode_equality():
    x = _x(64)
    assert abs(interpolation_ratio("H2_INTERP", np.cos(x)) - 1.0) < 1e-12
    assert abs(interpolation_ratio("H2_INTERP", np.sin(3 * x)) - 1.0) < 1e-12


def test_h2_two_modes_strict():
    x = _x(64)
    # |u_x|^2 = 5 pi, |u| |u_xx| = sqrt(2 pi) sqrt(17 pi)
    r = interpolation_ratio("H2_INTERP", np.cos(x) + np.cos(2 * x))
    assert r == pytest.approx(5 / math.sqrt(34), rel=1e-12)
    assert r < 1


def test_h2_random_sweep():
    rep = check_interpolation("H2_INTERP", TestFunctionSampler(seed=11, max_degree=20), trials=1000)
    assert rep.violations == 0 and rep.max_ratio <= 1 + 1e-12


@pytest.mark.parametrize("ineq,p", [("L4_INTERP", 2.0), ("LINF_INTERP", 1.0), ("LINF_INTERP", 2.0), ("LINF_INTERP", 4.0)])
def test_empirical_constant_inequalities(ineq, p):
    rep = check_interpolation(ineq, TestFunctionSampler(seed=5, max_degree=20), trials=1000, p=p)
    assert rep.violations == 0
    assert rep.max_ratio <= rep.constant * 1.05


def test_linf_bound_is_finite_on_extremal():
    # sawtooth-like data push the Linf ratio up but stay bounded
    x = _x(256)
    u = sum(np.sin(k * x) / k for k in range(1, 21))
    assert 0 < interpolation_ratio(Inequality.LINF_INTERP, u, 2.0) < 2


def test_interpolation_report_json():
    rep = check_interpolation("H2_INTERP", TestFunctionSampler(seed=0, max_degree=8), trials=10)
    d = json.loads(json.dumps(rep.as_dict()))
    assert d["inequality"] == "H2_INTERP" and d["trials"] == 10


def test_expansion_report_json(sampler):
    rep = check_expansion("V_X", ModelParams(1, 1, 1), sampler, trials=3, n=128)
    d = json.loads(json.dumps(rep.as_dict()))
    assert d["case"] == "V_X" and "residuals" not in d


def test_sigma_examples():
    assert check_sigma_constraints(2, 1, 1, 2).all_hold
    rep = check_sigma_constraints(2, 0.9, 1, 2)
    assert "alpha >= 2 (1 - 1/n)" in rep.failing()
    rep = check_sigma_constraints(3, 1, 1, 2)
    assert "alpha >= 2 (1 - 1/n)" in rep.failing()
    assert rep.alpha == Fraction(1)


def test_sigma_validation():
    with pytest.raises(ValueError):
        check_sigma_constraints(1, 1, 1)
    with pytest.raises(ValueError):
        check_sigma_constraints(2, 1, 1, m=1)


def test_sigma_scan():
    scan = scan_sigma_constraints(range(2, 7), m=2)
    assert scan.admits(2, 1, 1)
    for n in range(3, 7):
        assert not any(a == 1 for a, _ in scan.admissible[n])
        assert scan.min_alpha[n] > 1
    assert scan.min_alpha[2] == 1
    assert scan.n_with_smallest_alpha == 2


def test_frozen_constants_cover_fresh_search():
    # a fresh short search from a new seed never exceeds the frozen margin
    from parablow.calculus import empirical_constant, frozen_constant

    s = TestFunctionSampler(seed=42, max_degree=20)
    c = empirical_constant("L4_INTERP", s, 2.0, n_random=300, n_climb=100)
    assert c <= 1.05 * frozen_constant("L4_INTERP", 2.0, 20)
