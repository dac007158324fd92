import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parablow import PeriodicGrid


@pytest.fixture(scope="module")
def g():
    return PeriodicGrid(64)


def test_rejects_odd_or_small_n():
    with pytest.raises(ValueError):
        PeriodicGrid(63)
    with pytest.raises(ValueError):
        PeriodicGrid(8)
    with pytest.raises(ValueError):
        PeriodicGrid(64, dealias="smooth")


def test_zero_node(g):
    assert g.x[g.n // 2] == 0.0
    assert g.x[0] == -np.pi


def test_differentiate_sin(g):
    assert np.max(np.abs(g.differentiate(np.sin(g.x), 1) - np.cos(g.x))) < 1e-12


def test_differentiate_constant(g):
    for order in (1, 2, 3, 4):
        assert np.max(np.abs(g.differentiate(np.full(g.n, 3.0), order))) < 1e-12


def test_second_derivative_eigenfunction(g):
    f = np.sin(3 * g.x)
    assert np.max(np.abs(g.differentiate(f, 2) + 9 * f)) < 1e-11


def test_differentiate_bad_order(g):
    with pytest.raises(ValueError):
        g.differentiate(np.sin(g.x), 0)
    with pytest.raises(ValueError):
        g.differentiate(np.sin(g.x), 5)


def test_multiply_by_one_is_filter(g):
    rng = np.random.default_rng(0)
    b = rng.standard_normal(g.n)
    out = g.multiply_dealiased(np.ones(g.n), b)
    assert np.allclose(out, g.filter(b), atol=1e-13)
    high = np.fft.rfft(out)[g.k >= g.n / 3]
    assert np.max(np.abs(high)) < 1e-10


def test_multiply_low_modes(g):
    out = g.multiply_dealiased(np.sin(g.x), np.cos(g.x))
    assert np.max(np.abs(out - 0.5 * np.sin(2 * g.x))) < 1e-13


@pytest.mark.parametrize("dealias", ["truncate", "pad"])
def test_multiply_matches_symbolic_product(dealias):
    # degree n/6 - 1 inputs: the product degree stays below the kept band
    grid = PeriodicGrid(96, dealias)
    rng = np.random.default_rng(3)
    d = grid.n // 6 - 1
    ca, sa, cb, sb = rng.standard_normal((4, d + 1))
    x = grid.x
    k = np.arange(d + 1)[:, None]
    a = (ca[:, None] * np.cos(k * x) + sa[:, None] * np.sin(k * x)).sum(0)
    b = (cb[:, None] * np.cos(k * x) + sb[:, None] * np.sin(k * x)).sum(0)
    # exact product through product-to-sum formulas on a fine grid
    xf = np.linspace(-np.pi, np.pi, 4 * grid.n, endpoint=False)
    af = (ca[:, None] * np.cos(k * xf) + sa[:, None] * np.sin(k * xf)).sum(0)
    bf = (cb[:, None] * np.cos(k * xf) + sb[:, None] * np.sin(k * xf)).sum(0)
    exact = np.fft.irfft(np.fft.rfft(af * bf), n=4 * grid.n)[::4]
    assert np.max(np.abs(grid.multiply_dealiased(a, b) - exact)) < 1e-11


def test_pad_mode_keeps_more_modes():
    assert PeriodicGrid(96, "pad").k_cut > PeriodicGrid(96).k_cut


def test_integrate(g):
    assert g.integrate(np.ones(g.n)) == pytest.approx(2 * np.pi, abs=1e-13)
    assert abs(g.integrate(np.sin(g.x))) < 1e-14
    assert g.integrate(1 - np.cos(g.x)) == pytest.approx(2 * np.pi, abs=1e-13)


def test_norms(g):
    nm = g.norms(np.ones(g.n))
    assert nm.l1 == pytest.approx(2 * np.pi)
    assert nm.l2 == pytest.approx(np.sqrt(2 * np.pi))
    assert nm.linf == 1.0
    assert g.norms(np.sin(g.x)).l2 == pytest.approx(np.sqrt(np.pi), abs=1e-13)


def test_l1_of_cos_against_quadrature():
    grid = PeriodicGrid(4096)
    xf = np.linspace(-np.pi, np.pi, 200001)
    ref = np.trapezoid(np.abs(np.cos(xf)), xf) if hasattr(np, "trapezoid") else np.trapz(np.abs(np.cos(xf)), xf)
    assert ref == pytest.approx(4.0, abs=1e-8)
    assert grid.norms(np.cos(grid.x)).l1 == pytest.approx(4.0, abs=1e-5)


def test_lp_norm_infinite(g):
    f = np.cos(2 * g.x)
    assert g.norms(f, p=np.inf).lp == g.norms(f).linf


def test_symmetry_errors(g):
    assert g.symmetry_errors(np.sin(g.x), np.cos(g.x)) == pytest.approx((0.0, 0.0), abs=1e-15)
    odd, _ = g.symmetry_errors(np.sin(g.x) + 1e-3 * np.cos(g.x), np.cos(g.x))
    assert odd == pytest.approx(2e-3, rel=1e-9)


def test_symmetry_errors_brute_force(g):
    rng = np.random.default_rng(5)
    v, w = rng.standard_normal((2, g.n))
    odd = max(abs(v[j] + v[(g.n - j) % g.n]) for j in range(g.n))
    even = max(abs(w[j] - w[(g.n - j) % g.n]) for j in range(g.n))
    assert g.symmetry_errors(v, w) == pytest.approx((odd, even), rel=1e-15)


def test_trace_at_zero(g):
    assert g.trace_at_zero(1 - np.cos(g.x), 2) == pytest.approx(1.0, abs=1e-13)
    assert g.trace_at_zero(np.sin(g.x), 1) == pytest.approx(1.0, abs=1e-13)
    assert g.trace_at_zero(2.5 * np.sin(g.x), 0) == 0.0
    assert g.trace_at_zero(np.sin(g.x), 3) == pytest.approx(-1.0, abs=1e-12)


def test_trace_matches_differentiate(g):
    rng = np.random.default_rng(2)
    f = g.filter(rng.standard_normal(g.n))
    for order in (1, 2, 3):
        direct = g.differentiate(f, order)[g.n // 2]
        assert g.trace_at_zero(f, order) == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_spectral_tail(g):
    assert g.spectral_tail(np.sin(g.x)) < 1e-25
    kc = g.k_cut
    assert g.spectral_tail(np.cos(kc * g.x)) == pytest.approx(1.0)
    assert g.spectral_tail(np.zeros(g.n)) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 20), st.floats(-3, 3), st.floats(-3, 3))
def test_derivative_linear_and_exact(k, a, b):
    grid = PeriodicGrid(64)
    f = a * np.sin(k * grid.x) + b * np.cos(k * grid.x)
    df = a * k * np.cos(k * grid.x) - b * k * np.sin(k * grid.x)
    assert np.max(np.abs(grid.differentiate(f, 1) - df)) < 1e-11 * (1 + abs(a) + abs(b)) * k


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_reflect_is_involution(seed):
    grid = PeriodicGrid(32)
    f = np.random.default_rng(seed).standard_normal(grid.n)
    assert np.array_equal(grid.reflect(grid.reflect(f)), f)
