"""Energy functionals, balance checks and point traces at x = 0."""
from dataclasses import dataclass, field, fields

import numpy as np

from .exceptions import NotApplicable
from .grid import PeriodicGrid

TRACE_ORDERS = (0, 1, 2, 3)


@dataclass(frozen=True)
class EnergyReport:
    time: float
    e0: float
    e2: float
    e_total: float
    l1_omega: float
    dissipation_v: float
    dissipation_omega: float
    lyapunov_factor: float
    min_omega: float
    sym_odd: float
    sym_even: float
    spectral_tail: float
    # extra monitors used by the balance checks
    v_l2sq: float = 0.0
    eta_l2sq: float = 0.0
    mass_omega: float = 0.0
    max_abs_vx: float = 0.0
    max_abs_omega_xx: float = 0.0
    convective: bool = False

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _h2_parts(grid, fh):
    """Return (sum |c|^2, sum k^2 |c|^2, sum k^4 |c|^2), scaled to L2 integrals."""
    w = np.full(grid.n // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    p = w * np.abs(fh) ** 2 * (2.0 * np.pi / grid.n**2)
    k2 = grid.k**2
    return float(np.sum(p)), float(np.sum(k2 * p)), float(np.sum(k2 * k2 * p))


def energy_report(params, state, grid=None):
    """Compute the energy and monitor values for one state."""
    if grid is None:
        grid = PeriodicGrid(state.n)
    v, omega = state.v, state.omega
    wp = np.maximum(omega, 0.0)
    eta = np.sqrt(wp)
    vh = grid.to_spectral(v)
    wh = grid.to_spectral(omega)
    eh = grid.to_spectral(eta)

    v0, v1, v2 = _h2_parts(grid, vh)
    n0, n1, n2 = _h2_parts(grid, eh)
    d1 = grid.derivative_symbol(1)
    vx = grid.from_spectral(d1 * vh)
    wx = grid.from_spectral(d1 * wh)
    ex = grid.from_spectral(d1 * eh)
    wxx = grid.from_spectral(grid.derivative_symbol(2) * wh)

    dx = grid.spacing
    diss_v = float(np.sum(wp**params.alpha * vx * vx) * dx)
    diss_w = float(np.sum(wp**params.beta * wx * wx) * dx)
    eta_inf = float(np.max(eta))
    grad_inf = max(float(np.max(np.abs(vx))), float(np.max(np.abs(ex))))
    lyap = (eta_inf ** (2 * params.alpha - 2) + eta_inf ** (2 * params.beta - 2)) * grad_inf**2
    odd, even = grid.symmetry_errors(v, omega)
    tail = max(grid.spectral_tail_from_spectral(vh), grid.spectral_tail_from_spectral(wh))

    return EnergyReport(
        time=state.time,
        e0=v0 + n0,
        e2=v2 + n2,
        e_total=v0 + v1 + v2 + n0 + n1 + n2,
        l1_omega=float(np.sum(np.abs(omega)) * dx),
        dissipation_v=diss_v,
        dissipation_omega=diss_w,
        lyapunov_factor=float(lyap),
        min_omega=float(np.min(omega)),
        sym_odd=odd,
        sym_even=even,
        spectral_tail=tail,
        v_l2sq=v0,
        eta_l2sq=n0,
        mass_omega=float(np.sum(omega) * dx),
        max_abs_vx=float(np.max(np.abs(vx))),
        max_abs_omega_xx=float(np.max(np.abs(wxx))),
        convective=params.convective,
    )


def first_integral(report):
    """int omega + 1/2 int v^2, conserved by the non-convective system."""
    return report.mass_omega + 0.5 * report.v_l2sq


def conservation_residual(history, relative=False):
    """Max deviation of int omega + 1/2 ||v||^2 from its initial value."""
    history = list(history)
    if not history:
        return 0.0
    if any(r.convective for r in history):
        raise NotApplicable("the first integral is not conserved with convection")
    q = np.array([first_integral(r) for r in history])
    res = float(np.max(np.abs(q - q[0])))
    if relative:
        return res / abs(q[0]) if q[0] != 0 else res
    return res


def _cumtrapz(t, y):
    out = np.zeros_like(y)
    if len(t) > 1:
        out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
    return out


def _trapz_error_bound(t, y):
    """Cumulative a-posteriori estimate of the trapezoid error."""
    out = np.zeros_like(y)
    if len(t) < 3:
        return out
    h = np.diff(t)
    slope = np.diff(y) / h
    curv = np.abs(np.diff(slope)) / (0.5 * (h[1:] + h[:-1]))
    # end intervals: extrapolate the curvature trend instead of copying it
    if curv.size > 1:
        first = max(curv[0], 2 * curv[0] - curv[1])
        last = max(curv[-1], 2 * curv[-1] - curv[-2])
    else:
        first = last = curv[0]
    curv = np.concatenate([[first], np.maximum(curv[:-1], curv[1:]), [last]])
    out[1:] = np.cumsum(h**3 * curv / 12.0)
    return out


@dataclass
class InequalityReport:
    applicable: bool
    tol: float
    max_excess: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return self.applicable and not self.violations


def energy_inequality_check(history, tol=1e-6):
    """Check the three a-priori balance inequalities at every sample.

    * ||v||^2 + 2 int_0^t D_v <= ||v0||^2 (1 + tol)
    * int omega(t) <= int omega0 + 1/2 ||v0||^2
    * ||eta(t)||^2 <= ||eta0||^2 + ||v0||^2

    Time integrals are trapezoid sums on the samples; a trapezoid error
    estimate is added to the slack so coarse sampling cannot cause a
    false violation.
    """
    history = list(history)
    if not history or any(r.convective for r in history):
        return InequalityReport(False, tol)
    t = np.array([r.time for r in history])
    vsq = np.array([r.v_l2sq for r in history])
    dv = np.array([r.dissipation_v for r in history])
    l1 = np.array([r.l1_omega for r in history])
    esq = np.array([r.eta_l2sq for r in history])
    v0sq, l10, e0sq = vsq[0], l1[0], esq[0]
    quad = _cumtrapz(t, dv)
    slack = 4.0 * _trapz_error_bound(t, dv)

    checks = {
        "v_energy": (vsq + 2.0 * quad, v0sq * (1.0 + tol) + slack),
        "omega_l1": (l1, l10 + 0.5 * v0sq + tol * max(1.0, l10 + v0sq)),
        "eta_l2": (esq, e0sq + v0sq + tol * max(1.0, e0sq + v0sq)),
    }
    rep = InequalityReport(True, tol)
    for name, (lhs, rhs) in checks.items():
        excess = lhs - rhs
        rep.max_excess[name] = float(np.max(excess))
        for i in np.nonzero(excess > 0)[0]:
            rep.violations.append((float(t[i]), name, float(excess[i])))
    return rep


@dataclass
class PointTrace:
    """Derivatives of v and omega at x = 0 over time."""

    times: list = field(default_factory=list)
    v_rows: list = field(default_factory=list)
    omega_rows: list = field(default_factory=list)

    def append(self, t, v_row, omega_row):
        if self.times and t <= self.times[-1]:
            raise ValueError(f"trace times must increase ({t} after {self.times[-1]})")
        self.times.append(float(t))
        self.v_rows.append(tuple(float(x) for x in v_row))
        self.omega_rows.append(tuple(float(x) for x in omega_row))

    def __len__(self):
        return len(self.times)

    @property
    def t(self):
        return np.asarray(self.times, dtype=np.float64)

    @property
    def v_derivs(self):
        return np.asarray(self.v_rows, dtype=np.float64).reshape(-1, 4)

    @property
    def omega_derivs(self):
        return np.asarray(self.omega_rows, dtype=np.float64).reshape(-1, 4)

    def column(self, name):
        """Columns 'V0'..'V3' and 'O0'..'O3'."""
        kind, j = name[0], int(name[1:])
        return (self.v_derivs if kind == "V" else self.omega_derivs)[:, j]

    @classmethod
    def from_arrays(cls, times, v_derivs=None, omega_derivs=None):
        times = np.asarray(times, dtype=np.float64)
        m = len(times)
        v = np.zeros((m, 4)) if v_derivs is None else np.asarray(v_derivs, dtype=np.float64)
        o = np.zeros((m, 4)) if omega_derivs is None else np.asarray(omega_derivs, dtype=np.float64)
        tr = cls()
        for i in range(m):
            tr.append(times[i], v[i], o[i])
        return tr


def record_trace(state, grid=None, trace=None):
    """Return (t, V0..V3, O0..O3) at x = 0; append to ``trace`` if given."""
    if grid is None:
        grid = PeriodicGrid(state.n)
    vrow = tuple(grid.trace_at_zero(state.v, j) for j in TRACE_ORDERS)
    orow = tuple(grid.trace_at_zero(state.omega, j) for j in TRACE_ORDERS)
    if trace is not None:
        trace.append(state.time, vrow, orow)
    return state.time, vrow, orow
