"""Degenerate parabolic systems for (v, omega) and their right-hand sides."""
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._validation import check_field, check_positive
from .exceptions import NegativePower, NonFiniteField
from .grid import PeriodicGrid

NEGATIVITY_TOLERANCE = 1e-8


def in_theorem_alpha_range(alpha):
    return alpha == 1.0 or alpha >= 2.0


def in_theorem_beta_range(beta):
    return beta in (1.0, 2.0) or beta >= 3.0


@dataclass(frozen=True)
class ModelParams:
    """Exponents, diffusion constant and convection switch.

    The non-convective system is

        v_t = (w^alpha v_x)_x
        w_t = kappa0 (w^beta w_x)_x + w^alpha v_x^2

    and the convective one adds -v v_x and -v w_x on the left.
    """

    alpha: float = 1.0
    beta: float = 1.0
    kappa0: float = 1.0
    convective: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta"):
            val = getattr(self, name)
            if not isinstance(val, (int, float, np.floating, np.integer)) or not math.isfinite(val):
                raise ValueError(f"{name} must be a finite real, got {val!r}")
            if val < 1.0:
                raise ValueError(f"{name} must be >= 1, got {val!r}")
            object.__setattr__(self, name, float(val))
        object.__setattr__(self, "kappa0", check_positive(self.kappa0, "kappa0"))
        object.__setattr__(self, "convective", bool(self.convective))

    @classmethod
    def for_theorem(cls, alpha, beta, kappa0=1.0, convective=False):
        """Construct params, refusing exponents outside the blow-up case lists."""
        if not in_theorem_alpha_range(alpha):
            raise ValueError(f"alpha={alpha} is outside {{1}} U [2, inf)")
        if not in_theorem_beta_range(beta):
            raise ValueError(f"beta={beta} is outside {{1, 2}} U [3, inf)")
        return cls(alpha, beta, kappa0, convective)


@dataclass(frozen=True, eq=False)
class State:
    """Fields v and omega sampled on a periodic grid at one time."""

    time: float
    v: np.ndarray
    omega: np.ndarray
    negativity_tolerance: float = field(default=NEGATIVITY_TOLERANCE, repr=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.v, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("v must be one-dimensional")
        omega = check_field(self.omega, v.shape[0], "omega")
        tol = self.negativity_tolerance * max(1.0, float(np.max(np.abs(omega), initial=0.0)))
        if omega.size and np.min(omega) < -tol:
            raise ValueError(f"omega has samples below -{tol:g} (min {np.min(omega):g})")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def unchecked(cls, time, v, omega):
        """Build a State without the negativity check (solver output)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "time", float(time))
        object.__setattr__(obj, "v", np.ascontiguousarray(v, dtype=np.float64))
        object.__setattr__(obj, "omega", np.ascontiguousarray(omega, dtype=np.float64))
        object.__setattr__(obj, "negativity_tolerance", NEGATIVITY_TOLERANCE)
        return obj

    @property
    def n(self):
        return self.v.shape[0]

    @property
    def eta(self):
        return np.sqrt(np.maximum(self.omega, 0.0))

    def grid(self, dealias="truncate"):
        return PeriodicGrid(self.n, dealias)


class RegimeLabel(str, Enum):
    NC_CASE1 = "NC-Case1"
    NC_CASE2 = "NC-Case2"
    NC_CASE3 = "NC-Case3"
    C_THM_A = "C-ThmA"
    C_THM_B_A = "C-ThmB-a"
    C_THM_B_B = "C-ThmB-b"
    NONE = "none"


@dataclass(frozen=True)
class RegimeCase:
    label: RegimeLabel
    hypothesis_report: tuple = ()

    @property
    def applies(self):
        return self.label is not RegimeLabel.NONE


def _pow(x, p):
    if p == 1.0:
        return x
    if p == 2.0:
        return x * x
    return x**p


class _Kernel:
    """Spectral right-hand side shared by the public RHS functions and the integrator.

    Works on rfft coefficients of shape (2, n//2 + 1).  ``form`` is
    ``"original"`` for (v, omega) or ``"good"`` for (v, eta).
    """

    def __init__(self, params, grid, form="original", frozen_omega=False):
        if form not in ("original", "good"):
            raise ValueError(f"unknown form {form!r}")
        self.params = params
        self.grid = grid
        self.form = form
        self.frozen_omega = frozen_omega
        self.d1 = grid.derivative_symbol(1)

    def __call__(self, S):
        """Return (dS/dt, max diffusivity, max |v|) for spectral state S."""
        p = self.params
        g = self.grid
        d1 = self.d1
        rows = g.synthesize(np.concatenate([S, d1 * S]))
        v, u, vx, ux = rows
        up = np.maximum(u, 0.0)
        if self.form == "original":
            A = _pow(up, p.alpha)
            B = _pow(up, p.beta)
            prods = [A * vx, p.kappa0 * B * ux, A * vx * vx]
            diff = A + p.kappa0 * B
        else:
            e2a = _pow(up, 2.0 * p.alpha)
            e2b = _pow(up, 2.0 * p.beta)
            src = 0.5 * _pow(up, 2.0 * p.alpha - 1.0) * vx * vx
            src = src + p.kappa0 * _pow(up, 2.0 * p.beta - 1.0) * ux * ux
            prods = [e2a * vx, p.kappa0 * e2b * ux, src]
            diff = e2a + p.kappa0 * e2b
        if p.convective:
            prods += [v * vx, v * ux]
        F = g.analyze(np.stack(prods))
        out = np.empty_like(S)
        out[0] = d1 * F[0]
        out[1] = d1 * F[1] + F[2]
        if p.convective:
            out[0] -= F[3]
            out[1] -= F[4]
        if self.frozen_omega:
            out[1] = 0.0
        vmax = float(np.max(np.abs(v))) if p.convective else 0.0
        return out, float(np.max(diff)), vmax


def _evaluate(params, v, u, grid, form):
    if grid is None:
        grid = PeriodicGrid(len(v))
    v = check_field(v, grid.n, "v")
    u = check_field(u, grid.n, "second field")
    kern = _Kernel(params, grid, form)
    out, _, _ = kern(np.stack([grid.to_spectral(v), grid.to_spectral(u)]))
    dv, du = grid.from_spectral(out)
    if not (np.all(np.isfinite(dv)) and np.all(np.isfinite(du))):
        raise NonFiniteField("right-hand side produced non-finite samples")
    return dv, du


def rhs_original(params, state, grid=None):
    """Time derivatives (dv/dt, domega/dt) in divergence form."""
    return _evaluate(params, state.v, state.omega, grid, "original")


def rhs_good(params, v, eta, grid=None):
    """Time derivatives (dv/dt, deta/dt) for eta = sqrt(omega)."""
    if 2.0 * params.alpha - 1.0 < 0 or 2.0 * params.beta - 1.0 < 0:
        raise NegativePower("2*alpha - 1 and 2*beta - 1 must be non-negative")
    eta = np.asarray(eta, dtype=np.float64)
    if eta.size and np.min(eta) < -NEGATIVITY_TOLERANCE * max(1.0, float(np.max(np.abs(eta)))):
        raise ValueError("eta must be non-negative")
    return _evaluate(params, v, eta, grid, "good")


def classify_regime(params, initial, grid=None, tol=1e-10):
    """Return which blow-up theorem's hypotheses hold for (params, initial)."""
    if grid is None:
        grid = PeriodicGrid(initial.n)
    a, b, k0 = params.alpha, params.beta, params.kappa0
    odd, even = grid.symmetry_errors(initial.v, initial.omega)
    scale = max(1.0, float(np.max(np.abs(initial.omega))), float(np.max(np.abs(initial.v))))
    v1 = grid.trace_at_zero(initial.v, 1)
    o0 = grid.trace_at_zero(initial.omega, 0)
    o2 = grid.trace_at_zero(initial.omega, 2)

    report = [
        ("v0 odd, omega0 even", odd <= tol * scale and even <= tol * scale),
        ("omega0 >= 0", bool(np.min(initial.omega) >= -NEGATIVITY_TOLERANCE * scale)),
        ("omega0(0) = 0", abs(o0) <= tol * scale),
        ("d2x omega0(0) > 0", o2 > 0),
    ]
    common = all(ok for _, ok in report)
    label = RegimeLabel.NONE

    if not params.convective:
        c1 = a == 1.0 and (b == 2.0 or b >= 3.0)
        c1_data = o2 > 0 and v1 >= math.sqrt(2.0 * o2)
        report += [
            ("alpha = 1, beta in {2} U [3, inf)", c1),
            ("d_x v0(0) >= sqrt(2 d2x omega0(0))", c1_data),
            ("alpha = 1, beta = 1", a == 1.0 and b == 1.0),
            ("alpha >= 2, beta = 1", a >= 2.0 and b == 1.0),
        ]
        if common:
            if c1 and c1_data:
                label = RegimeLabel.NC_CASE1
            elif a == 1.0 and b == 1.0:
                label = RegimeLabel.NC_CASE2
            elif a >= 2.0 and b == 1.0:
                label = RegimeLabel.NC_CASE3
    else:
        thm_a = in_theorem_alpha_range(a) and in_theorem_beta_range(b)
        x0 = 3.0 * k0 * o2 - 2.0 * v1
        report += [
            ("alpha in {1} U [2, inf), beta in {1, 2} U [3, inf)", thm_a),
            ("d_x v0(0) < 0", v1 < 0),
            ("beta = 1, alpha in {1} U [2, inf)", b == 1.0 and in_theorem_alpha_range(a)),
            ("d_x v0(0) >= 0", v1 >= 0),
            ("alpha >= 2: 3 kappa0 d2x omega0(0) - 2 d_x v0(0) > 0", x0 > 0),
            ("alpha = 1: 3 kappa0 d2x omega0(0) > 1", 3.0 * k0 * o2 > 1.0),
        ]
        if common:
            if thm_a and v1 < 0:
                label = RegimeLabel.C_THM_A
            elif b == 1.0 and v1 >= 0:
                if a >= 2.0 and x0 > 0:
                    label = RegimeLabel.C_THM_B_A
                elif a == 1.0 and 3.0 * k0 * o2 > 1.0:
                    label = RegimeLabel.C_THM_B_B
    return RegimeCase(label, tuple(report))
