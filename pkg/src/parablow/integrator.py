"""Classical RK4 time stepping with a diffusive step-size limit."""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._validation import check_in_range, check_positive
from .diagnostics import PointTrace, energy_report, record_trace
from .exceptions import NonFiniteField
from .grid import PeriodicGrid
from .model import State, _Kernel

DT_EPS = 1e-12


@dataclass(frozen=True)
class StepControl:
    cfl: float = 0.25
    dt_min: float = 1e-12
    dt_max: float = 1e-3
    t_end: float = 1.0
    stop_threshold: float = 1e6
    sample_interval: float = 1e-2

    def __post_init__(self):
        check_in_range(self.cfl, "cfl", low=0.0, high=1.0, low_open=True)
        check_positive(self.dt_min, "dt_min")
        check_positive(self.dt_max, "dt_max")
        if self.dt_min > self.dt_max:
            raise ValueError(f"dt_min={self.dt_min} exceeds dt_max={self.dt_max}")
        check_positive(self.t_end, "t_end", strict=False)
        check_positive(self.stop_threshold, "stop_threshold")
        check_positive(self.sample_interval, "sample_interval")


class HaltReason(str, Enum):
    REACHED_T_END = "ReachedTEnd"
    BLOWUP_THRESHOLD = "BlowupThreshold"
    STEP_UNDERFLOW = "StepUnderflow"
    NON_FINITE = "NonFinite"


@dataclass
class RunOutcome:
    final_state: State
    halt_reason: HaltReason
    trace: PointTrace
    diagnostics_series: list = field(default_factory=list)
    steps: int = 0

    @property
    def reports(self):
        return self.diagnostics_series


def stable_dt(grid, control, max_diffusivity, max_speed=0.0):
    """Largest step allowed by the diffusive (and advective) limits."""
    dx = grid.spacing
    dt = control.cfl * dx * dx / (max_diffusivity + DT_EPS)
    if max_speed > 0.0:
        dt = min(dt, control.cfl * dx / max_speed)
    return min(control.dt_max, dt)


def _rk4(kern, S, dt, k1):
    k2, _, _ = kern(S + (0.5 * dt) * k1)
    k3, _, _ = kern(S + (0.5 * dt) * k2)
    k4, _, _ = kern(S + dt * k3)
    return S + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _finite(a):
    return bool(np.isfinite(np.sum(a.view(np.float64))))


def step(params, state, control, grid=None, frozen_omega=False, dt=None):
    """Advance ``state`` by one RK4 step (dt from the stability formula unless given)."""
    if grid is None:
        grid = PeriodicGrid(state.n)
    kern = _Kernel(params, grid, frozen_omega=frozen_omega)
    S = np.stack([grid.to_spectral(state.v), grid.to_spectral(state.omega)])
    k1, dmax, vmax = kern(S)
    if not _finite(k1):
        raise NonFiniteField("non-finite right-hand side")
    if dt is None:
        dt = stable_dt(grid, control, dmax, vmax)
    S = _rk4(kern, S, dt, k1)
    if not _finite(S):
        raise NonFiniteField("non-finite state after step")
    v, w = grid.from_spectral(S)
    return State.unchecked(state.time + dt, v, w)


class _Sampler:
    def __init__(self, params, grid, form, observers, with_reports):
        self.params = params
        self.grid = grid
        self.form = form
        self.observers = list(observers)
        self.with_reports = with_reports
        self.trace = PointTrace()
        self.reports = []

    def state_from(self, t, S):
        v, u = self.grid.from_spectral(S)
        if self.form == "good":
            u = u * u
        return State.unchecked(t, v, u)

    def __call__(self, t, S):
        state = self.state_from(t, S)
        record_trace(state, self.grid, self.trace)
        report = None
        if self.with_reports:
            report = energy_report(self.params, state, self.grid)
            self.reports.append(report)
        for obs in self.observers:
            obs(state, report)
        return state


def run(
    params,
    initial,
    control,
    observers=(),
    grid=None,
    form="original",
    frozen_omega=False,
    diagnostics=True,
):
    """Integrate from ``initial`` until t_end, blow-up threshold, underflow or NaN.

    ``form="good"`` evolves (v, eta = sqrt(omega)) instead of (v, omega);
    states handed to observers and returned are always in (v, omega).
    """
    if grid is None:
        grid = PeriodicGrid(initial.n)
    kern = _Kernel(params, grid, form=form, frozen_omega=frozen_omega)
    second = initial.eta if form == "good" else initial.omega
    S = np.stack([grid.to_spectral(initial.v), grid.to_spectral(second)])
    sampler = _Sampler(params, grid, form, observers, diagnostics)

    t0 = initial.time
    t_end = t0 + control.t_end
    t = t0
    state = sampler(t, S)
    last_sampled = t
    i_sample = 1
    steps = 0
    halt = HaltReason.REACHED_T_END
    w_trace = grid.trace_weights(2)

    while t < t_end:
        next_sample = min(t0 + i_sample * control.sample_interval, t_end)
        k1, dmax, vmax = kern(S)
        if not _finite(k1):
            halt = HaltReason.NON_FINITE
            break
        dt = stable_dt(grid, control, dmax, vmax)
        if dt < control.dt_min:
            halt = HaltReason.STEP_UNDERFLOW
            break
        hit = t + dt >= next_sample - 1e-14 * max(1.0, abs(next_sample))
        if hit:
            dt = next_sample - t
        S_new = _rk4(kern, S, dt, k1)
        if not _finite(S_new):
            halt = HaltReason.NON_FINITE
            break
        S = S_new
        t = next_sample if hit else t + dt
        steps += 1

        if form == "good":
            eta = grid.from_spectral(S[1])
            o2 = float(np.real(np.dot(w_trace, grid.to_spectral(eta * eta))))
        else:
            o2 = float(np.real(np.dot(w_trace, S[1])))
        if abs(o2) > control.stop_threshold:
            state = sampler(t, S)
            last_sampled = t
            halt = HaltReason.BLOWUP_THRESHOLD
            break
        if hit:
            state = sampler(t, S)
            last_sampled = t
            i_sample += 1

    if last_sampled != t:
        state = sampler(t, S)
    if steps == 0:
        state = initial
    return RunOutcome(state, halt, sampler.trace, sampler.reports, steps)
