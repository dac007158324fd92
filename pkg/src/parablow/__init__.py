"""Spectral laboratory for degenerate parabolic (v, omega) systems and their blow-up at x = 0."""
from .grid import PeriodicGrid
from .model import ModelParams, RegimeCase, RegimeLabel, State, classify_regime, rhs_good, rhs_original
from .integrator import HaltReason, RunOutcome, StepControl, run, step
from .diagnostics import EnergyReport, PointTrace, energy_report, record_trace
from .scenarios import InitPreset, build
from .oracle import ClosedForm, ReducedState, closed_form, integrate_reduced
from .analyzer import BlowupRateEstimator, FitConfig, Verdict, compare_with_oracle, fit_blowup
from .calculus import TestFunctionSampler, check_expansion, check_interpolation, check_sigma_constraints
from .config import RunConfig, load_config

__version__ = "0.1.0"

__all__ = [
    "PeriodicGrid",
    "ModelParams",
    "RegimeCase",
    "RegimeLabel",
    "State",
    "classify_regime",
    "rhs_good",
    "rhs_original",
    "HaltReason",
    "RunOutcome",
    "StepControl",
    "run",
    "step",
    "EnergyReport",
    "PointTrace",
    "energy_report",
    "record_trace",
    "InitPreset",
    "build",
    "ClosedForm",
    "ReducedState",
    "closed_form",
    "integrate_reduced",
    "BlowupRateEstimator",
    "FitConfig",
    "Verdict",
    "compare_with_oracle",
    "fit_blowup",
    "TestFunctionSampler",
    "check_expansion",
    "check_interpolation",
    "check_sigma_constraints",
    "RunConfig",
    "load_config",
]
