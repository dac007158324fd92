"""Blow-up time and rate estimation from traces, and oracle adjudication."""
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_series
from .exceptions import InsufficientGrowth
from .oracle import ClosedForm, ReducedSeries


class Verdict(str, Enum):
    MATCHES_ORACLE = "MatchesOracle"
    BOUND_SATISFIED = "BoundSatisfied"
    INCONCLUSIVE = "Inconclusive"
    VIOLATION = "Violation"


def growth_phase_end(y):
    """Index one past the first global maximum (the monotone growth phase)."""
    return int(np.argmax(y)) + 1


def auto_window(y, decades=1.0):
    """Trailing samples of the growth phase within `decades` of its peak."""
    end = growth_phase_end(y)
    level = y[end - 1] / 10.0**decades
    start = end - 1
    while start > 0 and y[start - 1] >= level:
        start -= 1
    return start, end


class BlowupRateEstimator(RegressorMixin, BaseEstimator):
    """Fit Omega2(t) ~ 1/(m t + b), i.e. a (t0 - t)^-1 law.

    ``fit(t, omega2)`` stores ``t0_``, ``exponent_``, ``window_`` and
    ``residual_``.  By default the fit uses the last factor ``growth_factor``
    of growth before the peak of Omega2; ``window`` overrides this with a
    time interval ``(t_start, t_end)``.
    """

    def __init__(self, growth_factor=10.0, window=None, min_samples=3):
        self.growth_factor = growth_factor
        self.window = window
        self.min_samples = min_samples

    def _select(self, t, y):
        if self.window is not None:
            lo, hi = self.window
            idx = np.nonzero((t >= lo) & (t <= hi))[0]
            if idx.size < self.min_samples:
                raise InsufficientGrowth(f"window {self.window} holds {idx.size} samples")
            return idx[0], idx[-1] + 1
        end = growth_phase_end(y)
        first = y[0]
        # relative slack absorbs round-off in the factor itself
        if not first > 0 or y[end - 1] < self.growth_factor * first * (1.0 - 1e-12):
            raise InsufficientGrowth(
                f"Omega2 grows from {first:.6g} to at most {y[end - 1]:.6g}; "
                f"need a factor of {self.growth_factor:g}"
            )
        win = auto_window(y, np.log10(self.growth_factor))
        if win[1] - win[0] < self.min_samples:
            raise InsufficientGrowth("too few samples above the growth level")
        return win

    def fit(self, t, omega2):
        t, y = check_series(t, omega2, min_len=self.min_samples)
        i0, i1 = self._select(t, y)
        tw, yw = t[i0:i1], y[i0:i1]
        if np.any(yw <= 0):
            raise InsufficientGrowth("Omega2 must be positive in the fit window")
        inv = 1.0 / yw
        A = np.column_stack([tw, np.ones_like(tw)])
        (m, b), *_ = np.linalg.lstsq(A, inv, rcond=None)
        if not m < 0:
            raise InsufficientGrowth("1/Omega2 does not decrease over the window")
        t0 = -b / m
        fitted = m * tw + b
        self.slope_ = float(m)
        self.intercept_ = float(b)
        self.t0_ = float(t0)
        self.residual_ = float(np.sqrt(np.mean((inv - fitted) ** 2)) / np.mean(np.abs(inv)))
        ok = tw < t0
        if np.count_nonzero(ok) >= 2:
            self.exponent_ = float(np.polyfit(np.log(t0 - tw[ok]), np.log(yw[ok]), 1)[0])
        else:
            self.exponent_ = float("nan")
        self.window_ = (float(tw[0]), float(tw[-1]))
        self.window_index_ = (int(i0), int(i1))
        return self

    def predict(self, t):
        check_is_fitted(self, "t0_")
        t = np.asarray(t, dtype=np.float64)
        return 1.0 / (self.slope_ * t + self.intercept_)


@dataclass(frozen=True)
class FitConfig:
    rel_tol: float = 0.02
    exponent_range: tuple = (-1.1, -0.9)
    growth_factor: float = 10.0
    window: Optional[tuple] = None


@dataclass
class BlowupEstimate:
    t0_hat: float
    exponent_hat: float
    fit_window: tuple
    residual: float
    verdict: Verdict
    case: str = "none"
    reference_t0: Optional[float] = None
    spectral_tail_at_window_end: Optional[float] = None
    tolerances: dict = field(default_factory=dict)

    def as_dict(self):
        d = asdict(self)
        d["verdict"] = self.verdict.value
        d["fit_window"] = list(self.fit_window)
        return d


def _verdict(t0_hat, exponent, closed, config):
    if closed is None or closed.singular_time is None:
        return Verdict.INCONCLUSIVE
    ref = closed.singular_time
    lo, hi = config.exponent_range
    rate_ok = lo <= exponent <= hi
    if closed.kind == "exact":
        if abs(t0_hat - ref) <= config.rel_tol * abs(ref) and rate_ok:
            return Verdict.MATCHES_ORACLE
        return Verdict.VIOLATION
    # envelopes only bound t0 from above
    if t0_hat <= ref * (1.0 + config.rel_tol):
        return Verdict.BOUND_SATISFIED
    return Verdict.VIOLATION


def fit_blowup(trace, config=None, closed_form=None, spectral_tail=None):
    """Estimate t0 and the rate exponent from the Omega2 column of ``trace``.

    ``closed_form`` (from the oracle) provides the verdict; ``spectral_tail``
    is an optional per-sample series aligned with the trace, reported at the
    end of the fit window.
    """
    config = config or FitConfig()
    est = BlowupRateEstimator(config.growth_factor, config.window)
    est.fit(trace.t, trace.column("O2"))
    tail = None
    if spectral_tail is not None:
        tail = float(np.asarray(spectral_tail)[est.window_index_[1] - 1])
    return BlowupEstimate(
        t0_hat=est.t0_,
        exponent_hat=est.exponent_,
        fit_window=est.window_,
        residual=est.residual_,
        verdict=_verdict(est.t0_, est.exponent_, closed_form, config),
        case=closed_form.case_label.value if closed_form is not None else "none",
        reference_t0=closed_form.singular_time if closed_form is not None else None,
        spectral_tail_at_window_end=tail,
        tolerances={"rel_tol": config.rel_tol, "exponent_range": list(config.exponent_range)},
    )


@dataclass
class OracleComparison:
    window_end: float
    n_samples: int
    v1_max_rel_err: Optional[float] = None
    omega2_max_rel_err: Optional[float] = None
    envelope_margin: Optional[float] = None
    envelope_rel_margin: Optional[float] = None
    invariant_drift: Optional[float] = None
    v1_drift: Optional[float] = None
    linkage_residual: Optional[float] = None

    def as_dict(self):
        return asdict(self)


def _cumtrapz(t, y):
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
    return out


def compare_with_oracle(trace, oracle, params, omega2_cap=1e3):
    """Compare the PDE trace with an oracle over samples where Omega2 <= omega2_cap.

    ``oracle`` is a ClosedForm (exact or envelope) or a ReducedSeries.
    """
    t = trace.t
    v1 = trace.column("V1")
    o2 = trace.column("O2")
    keep = np.cumprod(o2 <= omega2_cap).astype(bool)
    if isinstance(oracle, ReducedSeries):
        keep &= t <= oracle.t[-1]
    elif oracle.singular_time is not None:
        keep &= t < oracle.singular_time
    t, v1, o2 = t[keep], v1[keep], o2[keep]
    rep = OracleComparison(window_end=float(t[-1]) if t.size else float("nan"), n_samples=int(t.size))
    if t.size == 0:
        return rep

    exact = isinstance(oracle, ReducedSeries) or oracle.kind == "exact"
    if isinstance(oracle, ReducedSeries):
        rv, ro = oracle.at(t)
    else:
        rv, ro = oracle(t)
    if exact:
        rep.v1_max_rel_err = float(np.max(np.abs(v1 - rv) / np.maximum(np.abs(rv), 1e-300)))
        rep.omega2_max_rel_err = float(np.max(np.abs(o2 - ro) / np.maximum(np.abs(ro), 1e-300)))
    else:
        rep.envelope_margin = float(np.min(o2 - ro))
        rep.envelope_rel_margin = float(np.min(o2 / ro - 1.0))
    if isinstance(oracle, ClosedForm) and oracle.invariant is not None:
        rep.invariant_drift = float(np.max(np.abs(oracle.invariant(v1, o2) - oracle.invariant_value)))

    if params.alpha == 1.0:
        # d/dt log V1 = Omega2 - [convective] V1 ties the two growth histories
        if np.all(v1 * v1[0] > 0):
            rate = o2 - (v1 if params.convective else 0.0)
            lhs = np.log(v1 / v1[0])
            rhs = _cumtrapz(t, rate)
            rep.linkage_residual = float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(np.abs(rhs)))))
    elif not params.convective:
        rep.v1_drift = float(np.max(np.abs(v1 - v1[0])))
    return rep
