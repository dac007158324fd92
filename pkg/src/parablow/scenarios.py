"""Symmetric initial data and named experiment presets."""
from dataclasses import dataclass

import numpy as np

from .exceptions import NegativeOmega
from .model import ModelParams, State


@dataclass(frozen=True)
class InitPreset:
    """Initial data v0 = sum c_k sin(kx), omega0 = const + sum d_k cos(kx).

    Without custom lists the preset is v0 = a sin x, omega0 = b (1 - cos x).
    Custom lists are ``((k, coeff), ...)``.  The constant term of omega0
    is always minus the sum of the cosine coefficients, so omega0(0) = 0.
    """

    name: str = "sine-versine"
    v_amplitude: float = 1.0
    omega_amplitude: float = 1.0
    sine_coeffs: tuple = None
    cosine_coeffs: tuple = None

    def sine_modes(self):
        if self.sine_coeffs is None:
            return ((1, float(self.v_amplitude)),)
        return tuple((int(k), float(c)) for k, c in self.sine_coeffs)

    def cosine_modes(self):
        if self.cosine_coeffs is None:
            return ((1, -float(self.omega_amplitude)),)
        return tuple((int(k), float(c)) for k, c in self.cosine_coeffs)

    def trace_values(self):
        """Exact (V1(0), Omega2(0)) from the coefficients."""
        v1 = sum(k * c for k, c in self.sine_modes())
        o2 = -sum(k * k * d for k, d in self.cosine_modes())
        return v1, o2


def build(preset, grid, time=0.0):
    """Synthesize the preset on ``grid``; raises NegativeOmega if omega0 < 0 somewhere."""
    x = grid.x
    v = np.zeros(grid.n)
    for k, c in preset.sine_modes():
        if k < 1 or k >= grid.n // 2:
            raise ValueError(f"sine mode {k} not representable on n={grid.n}")
        v += c * np.sin(k * x)
    # sum d_k (cos kx - 1) keeps omega(0) = 0 exactly at the x = 0 node
    omega = np.zeros(grid.n)
    for k, d in preset.cosine_modes():
        if k < 1 or k >= grid.n // 2:
            raise ValueError(f"cosine mode {k} not representable on n={grid.n}")
        omega += d * (np.cos(k * x) - 1.0)
    # exact parity on the grid: average with the reflected samples
    v = 0.5 * (v - grid.reflect(v))
    omega = 0.5 * (omega + grid.reflect(omega))
    v[0] = 0.0
    v[grid.n // 2] = 0.0
    omega[grid.n // 2] = 0.0
    low = float(np.min(omega))
    if low < 0.0:
        raise NegativeOmega(f"synthesized omega0 has minimum {low:.3e} < 0")
    return State(time, v, omega)


def shifted(state, offset):
    """Return a copy with a constant added to omega (strictly positive data)."""
    return State(state.time, state.v.copy(), state.omega + offset)


@dataclass(frozen=True)
class Scenario:
    name: str
    params: ModelParams
    preset: InitPreset
    description: str = ""


PRESETS = {
    "nc-case3": Scenario(
        "nc-case3",
        ModelParams(2.0, 1.0, 1.0, False),
        InitPreset("sine-versine", 1.0, 1.0),
        "alpha=2, beta=1: curvature blow-up with constant V1",
    ),
    "nc-case1": Scenario(
        "nc-case1",
        ModelParams(1.0, 2.0, 1.0, False),
        InitPreset("sine-versine", 2.0, 1.0),
        "alpha=1, beta=2: first integral Omega2 - V1^2/2",
    ),
    "nc-case2": Scenario(
        "nc-case2",
        ModelParams(1.0, 1.0, 1.0, False),
        InitPreset("sine-versine", 1.0, 1.0),
        "alpha=beta=1: envelope 1/(1 - 3 kappa0 t)",
    ),
    "c-burgers": Scenario(
        "c-burgers",
        ModelParams(2.0, 1.0, 0.05, True),
        InitPreset("sine-versine", -1.0, 1.0),
        "convective alpha=2, beta=1, V1(0) < 0: V1 = V1(0)/(1 + V1(0) t)",
    ),
    "c-thmb-a": Scenario(
        "c-thmb-a",
        ModelParams(2.0, 1.0, 1.0, True),
        InitPreset("sine-versine", 1.0, 1.0),
        "convective alpha=2, beta=1, V1(0) >= 0",
    ),
    "c-thmb-b": Scenario(
        "c-thmb-b",
        ModelParams(1.0, 1.0, 1.0, True),
        InitPreset("sine-versine", 0.5, 1.0),
        "convective alpha=beta=1, 3 kappa0 Omega2(0) > 1",
    ),
}


def preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
