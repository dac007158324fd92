import numpy as np
import pytest

from parablow import ModelParams, PeriodicGrid, State, StepControl, energy_report, record_trace, run
from parablow.diagnostics import (
    PointTrace,
    conservation_residual,
    energy_inequality_check,
    first_integral,
)
from parablow.exceptions import NotApplicable
from parablow.scenarios import InitPreset, build


@pytest.fixture(scope="module")
def g():
    return PeriodicGrid(128)


def test_report_examples(g):
    r = energy_report(ModelParams(), State(0.0, np.sin(g.x), np.zeros(g.n)), g)
    assert r.e0 == pytest.approx(np.pi, abs=1e-12)
    assert r.l1_omega == 0.0 and r.dissipation_v == 0.0

    r = energy_report(ModelParams(1, 1, 1), State(0.0, np.zeros(g.n), 1 - np.cos(g.x)), g)
    assert r.dissipation_omega == pytest.approx(np.pi, abs=1e-12)

    r = energy_report(ModelParams(1, 1, 1), State(0.0, np.sin(g.x), np.ones(g.n)), g)
    assert r.dissipation_v == pytest.approx(np.pi, abs=1e-12)


def test_dissipation_quadrature_oracle():
    # int (1 - cos x) sin^2 x dx by an independent fine trapezoid rule
    xf = np.linspace(-np.pi, np.pi, 100001)
    y = (1 - np.cos(xf)) * np.sin(xf) ** 2
    ref = float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(xf)))
    assert ref == pytest.approx(np.pi, abs=1e-8)


def test_e_total_bounds(g):
    s = build(InitPreset(), g)
    r = energy_report(ModelParams(), s, g)
    assert r.e0 + r.e2 <= r.e_total <= 2 * (r.e0 + r.e2)


def test_trace_row(g):
    _, vr, orow = record_trace(State(0.0, np.sin(g.x), 1 - np.cos(g.x)), g)
    assert vr == pytest.approx((0, 1, 0, -1), abs=1e-10)
    assert orow == pytest.approx((0, 0, 1, 0), abs=1e-10)


def test_trace_rejects_non_increasing_times():
    tr = PointTrace()
    tr.append(0.0, (0,) * 4, (0,) * 4)
    with pytest.raises(ValueError):
        tr.append(0.0, (0,) * 4, (0,) * 4)


def test_conservation_trivial(g):
    out = run(ModelParams(), State(0.0, np.zeros(g.n), np.zeros(g.n)), StepControl(t_end=0.01), grid=g)
    assert conservation_residual(out.reports) == 0.0


def test_conservation_rejects_convective(g):
    out = run(ModelParams(2, 1, 1, True), build(InitPreset(), g), StepControl(t_end=0.01), grid=g)
    with pytest.raises(NotApplicable):
        conservation_residual(out.reports)


def test_conservation_resolution_independent():
    vals = []
    for n in (64, 128):
        grid = PeriodicGrid(n)
        out = run(ModelParams(1, 1, 1), build(InitPreset(), grid), StepControl(t_end=0.1, sample_interval=0.02), grid=grid)
        vals.append(conservation_residual(out.reports, relative=True))
        assert first_integral(out.reports[0]) == pytest.approx(2 * np.pi + 0.5 * np.pi, rel=1e-12)
    assert max(vals) < 1e-10


def test_inequalities_case3():
    grid = PeriodicGrid(128)
    out = run(ModelParams(2, 1, 1), build(InitPreset(), grid), StepControl(t_end=0.3, sample_interval=0.01), grid=grid)
    rep = energy_inequality_check(out.reports, tol=1e-6)
    assert rep.applicable and rep.ok, rep.violations


def test_inequalities_zero_velocity(g):
    s = State(0.0, np.zeros(g.n), 1 - np.cos(g.x))
    out = run(ModelParams(1, 1, 1), s, StepControl(t_end=0.05, sample_interval=0.01), grid=g)
    assert all(r.v_l2sq == 0.0 for r in out.reports)
    assert energy_inequality_check(out.reports).ok


def test_inequalities_zero_omega(g):
    s = State(0.0, np.sin(g.x), np.zeros(g.n))
    out = run(ModelParams(1, 1, 1), s, StepControl(t_end=0.05, sample_interval=0.01), grid=g)
    assert np.max(np.abs(out.final_state.omega)) == 0.0
    v = [r.v_l2sq for r in out.reports]
    assert max(v) - min(v) < 1e-14
    assert energy_inequality_check(out.reports).ok


def test_inequality_detects_violation(g):
    s = build(InitPreset(), g)
    reps = [energy_report(ModelParams(), s, g)]
    bigger = State(0.01, 2 * s.v, s.omega)
    reps.append(energy_report(ModelParams(), bigger, g))
    rep = energy_inequality_check(reps)
    assert not rep.ok
    assert any(name == "v_energy" for _, name, _ in rep.violations)


def test_inequality_not_applicable_convective(g):
    out = run(ModelParams(2, 1, 1, True), build(InitPreset(), g), StepControl(t_end=0.01), grid=g)
    assert not energy_inequality_check(out.reports).applicable
