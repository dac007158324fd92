"""Exact ODEs for (V1, Omega2) at x = 0, their closed forms and a numerical integrator."""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .diagnostics import PointTrace
from .exceptions import NoClosedForm, UnsupportedExponent
from .model import RegimeLabel


@dataclass(frozen=True)
class ReducedState:
    t: float
    v1: float
    omega2: float
    omega0: float = 0.0

    def __post_init__(self):
        if self.omega0 != 0.0:
            raise ValueError("the reduction holds only with omega0 = 0 at x = 0")


def _indicator(p, name):
    if p == 1.0:
        return 1.0
    if p >= 2.0:
        return 0.0
    if 1.0 < p < 2.0:
        raise UnsupportedExponent(f"{name}={p} lies in (1, 2); the reduction is ill-defined")
    raise UnsupportedExponent(f"{name}={p} is below 1")


def reduced_rhs(params, rs):
    """Return (dV1/dt, dOmega2/dt)."""
    a = _indicator(params.alpha, "alpha")
    b = _indicator(params.beta, "beta")
    v1, o2 = rs.v1, rs.omega2
    dv1 = a * o2 * v1
    do2 = b * 3.0 * params.kappa0 * o2 * o2 + a * o2 * v1 * v1
    if params.convective:
        dv1 -= v1 * v1
        do2 -= 2.0 * v1 * o2
    return dv1, do2


def default_case(params, v1_0):
    """Case label implied by the exponents, convection flag and the sign of V1(0)."""
    a, b = params.alpha, params.beta
    _indicator(a, "alpha")
    _indicator(b, "beta")
    if not params.convective:
        if a == 1.0 and b == 1.0:
            return RegimeLabel.NC_CASE2
        if a >= 2.0 and b == 1.0:
            return RegimeLabel.NC_CASE3
        if a == 1.0 and (b == 2.0 or b >= 3.0):
            return RegimeLabel.NC_CASE1
        return RegimeLabel.NONE
    if v1_0 < 0:
        return RegimeLabel.C_THM_A
    if b == 1.0:
        return RegimeLabel.C_THM_B_A if a >= 2.0 else RegimeLabel.C_THM_B_B
    return RegimeLabel.NONE


_CASE_EXPONENTS = {
    RegimeLabel.NC_CASE1: (False, lambda a, b: a == 1.0 and (b == 2.0 or b >= 3.0)),
    RegimeLabel.NC_CASE2: (False, lambda a, b: a == 1.0 and b == 1.0),
    RegimeLabel.NC_CASE3: (False, lambda a, b: a >= 2.0 and b == 1.0),
    RegimeLabel.C_THM_A: (True, lambda a, b: (a == 1.0 or a >= 2.0) and (b in (1.0, 2.0) or b >= 3.0)),
    RegimeLabel.C_THM_B_A: (True, lambda a, b: a >= 2.0 and b == 1.0),
    RegimeLabel.C_THM_B_B: (True, lambda a, b: a == 1.0 and b == 1.0),
}


def validate_case(params, label):
    label = RegimeLabel(label)
    if label is RegimeLabel.NONE:
        return label
    conv, ok = _CASE_EXPONENTS[label]
    if params.convective != conv or not ok(params.alpha, params.beta):
        raise ValueError(
            f"params (alpha={params.alpha}, beta={params.beta}, convective={params.convective}) "
            f"do not belong to case {label.value}"
        )
    return label


@dataclass(frozen=True)
class ClosedForm:
    """Closed-form solution or envelope.

    ``kind`` is ``"exact"`` when ``evaluator`` solves the reduced ODEs and
    ``"lower bound"`` when it is an envelope that Omega2 (and |V1|) must
    stay above.  ``singular_time`` is t0 itself for exact forms, an upper
    bound on t0 for envelopes, or None.
    """

    case_label: RegimeLabel
    evaluator: Callable
    singular_time: Optional[float]
    kind: str = "exact"
    invariant: Optional[Callable] = None
    invariant_value: Optional[float] = None

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=np.float64))


def _nan_after(t, t0, values):
    if t0 is None:
        return values
    return tuple(np.where(t < t0, val, np.nan) for val in values)


def closed_form(params, initial, case_label=None):
    a0, u0, k0 = initial.v1, initial.omega2, params.kappa0
    label = validate_case(params, case_label) if case_label is not None else default_case(params, a0)
    s = initial.t

    if label is RegimeLabel.NC_CASE3:
        t0 = s + 1.0 / (3.0 * k0 * u0) if u0 > 0 else None

        def ev(t):
            tau = t - s
            return _nan_after(t, t0, (np.full_like(tau, a0), u0 / (1.0 - 3.0 * k0 * u0 * tau)))

        return ClosedForm(label, ev, t0)

    if label is RegimeLabel.NC_CASE1:
        inv = u0 - 0.5 * a0 * a0
        if not (u0 > 0 and a0 >= math.sqrt(2.0 * u0)):
            raise NoClosedForm("hypotheses unmet: need V1(0) >= sqrt(2 Omega2(0)) > 0")
        t0 = s + 1.0 / (2.0 * u0)

        def ev(t):
            env = u0 / (1.0 - 2.0 * u0 * (t - s))
            return _nan_after(t, t0, (np.sqrt(2.0 * np.maximum(env - inv, 0.0)), env))

        return ClosedForm(label, ev, t0, "lower bound", lambda v1, o2: o2 - 0.5 * v1 * v1, inv)

    if label is RegimeLabel.NC_CASE2:
        if u0 <= 0:
            raise NoClosedForm("envelope needs Omega2(0) > 0")
        t0 = s + 1.0 / (3.0 * k0 * u0)

        def ev(t):
            base = 1.0 - 3.0 * k0 * u0 * (t - s)
            return _nan_after(t, t0, (abs(a0) * base ** (-1.0 / (3.0 * k0)), u0 / base))

        return ClosedForm(label, ev, t0, "lower bound")

    if params.convective and params.alpha >= 2.0 and label in (RegimeLabel.C_THM_A, RegimeLabel.C_THM_B_A):
        # V1 solves a Riccati equation on its own; Omega2 is then linear in 1/Omega2
        tv = s - 1.0 / a0 if a0 < 0 else None
        cands = [] if tv is None else [tv]
        if params.beta == 1.0 and u0 > 0 and 3.0 * k0 * u0 > a0:
            cands.append(s + 1.0 / (3.0 * k0 * u0 - a0))
        t0 = min(cands) if cands else None

        def ev(t):
            tau = t - s
            g = 1.0 + a0 * tau
            v1 = a0 / g
            if params.beta == 1.0:
                o2 = u0 / (g * (g - 3.0 * k0 * u0 * tau))
            else:
                o2 = u0 / (g * g)
            return _nan_after(t, tv, (v1,))[0], _nan_after(t, t0, (o2,))[0]

        return ClosedForm(label, ev, t0)

    if label is RegimeLabel.C_THM_B_B:
        x = 3.0 * k0 * u0
        if x <= 1.0:
            raise NoClosedForm("envelope needs 3 kappa0 Omega2(0) > 1")
        t0 = s + math.log(x / (x - 1.0))

        def ev(t):
            e = np.exp(t - s)
            o2 = 1.0 / (3.0 * k0 + (1.0 / u0 - 3.0 * k0) * e)
            return _nan_after(t, t0, (np.full_like(e, np.nan), o2))

        return ClosedForm(label, ev, t0, "lower bound")

    raise NoClosedForm(f"no closed form or envelope for case {label.value}")


@dataclass
class ReducedSeries:
    t: np.ndarray
    v1: np.ndarray
    omega2: np.ndarray
    status: str
    dense: Optional[Callable] = None

    def at(self, times):
        """Values (v1, omega2) at arbitrary times inside the integrated range."""
        times = np.asarray(times, dtype=np.float64)
        if self.dense is None:
            return np.interp(times, self.t, self.v1), np.interp(times, self.t, self.omega2)
        y = self.dense(times)
        return y[0], y[1]

    def to_trace(self):
        """PointTrace with V1 and O2 filled, other derivative columns zero."""
        m = len(self.t)
        v = np.zeros((m, 4))
        o = np.zeros((m, 4))
        v[:, 1] = self.v1
        o[:, 2] = self.omega2
        return PointTrace.from_arrays(self.t, v, o)


def integrate_reduced(params, initial, t_end, tol=1e-10, threshold=1e6, t_eval=None):
    """Integrate the reduced ODEs with an adaptive 8(5,3) Runge-Kutta pair.

    Halts early when |Omega2| or |V1| exceeds ``threshold``.
    """
    reduced_rhs(params, initial)  # exponent check

    def f(t, y):
        return reduced_rhs(params, ReducedState(t, y[0], y[1]))

    def big(t, y):
        return threshold - max(abs(y[0]), abs(y[1]))

    big.terminal = True
    t_start = initial.t
    t_stop = t_start + t_end
    if t_end <= 0:
        return ReducedSeries(np.array([t_start]), np.array([initial.v1]), np.array([initial.omega2]), "t_end")
    sol = solve_ivp(
        f,
        (t_start, t_stop),
        [initial.v1, initial.omega2],
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-3,
        events=big,
        dense_output=True,
        t_eval=t_eval,
    )
    status = "threshold" if sol.status == 1 else ("t_end" if sol.status == 0 else "failed")
    return ReducedSeries(sol.t, sol.y[0], sol.y[1], status, sol.sol)
