"""Command-line front end: run, sweep, oracle, check-identities, fit, snapshot-resume."""
import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analyzer import FitConfig, Verdict, compare_with_oracle, fit_blowup
from .calculus import (
    ExpansionName,
    Inequality,
    TestFunctionSampler,
    check_expansion,
    check_interpolation,
    check_sigma_constraints,
    scan_sigma_constraints,
)
from .config import RunConfig, load_config
from .diagnostics import PointTrace
from .exceptions import ConfigError, InsufficientGrowth, NoClosedForm, ParablowError
from .integrator import HaltReason, run
from .model import ModelParams, RegimeLabel, State, classify_regime
from .oracle import ReducedState, closed_form, integrate_reduced
from .scenarios import build, shifted

CSV_HEADER = (
    "t,e0,e2,l1_omega,diss_v,diss_omega,V0,V1,V2,V3,O0,O1,O2,O3,"
    "min_omega,sym_odd,sym_even,spectral_tail"
).split(",")
TRACE_HEADER = ["t", "V0", "V1", "V2", "V3", "O0", "O1", "O2", "O3"]
SNAPSHOT_HEADER = ["t", "x", "v", "omega"]
GOOD_VERDICTS = {Verdict.MATCHES_ORACLE.value, Verdict.BOUND_SATISFIED.value}

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3


def _f(x):
    return "%.17g" % x


def _clean(obj):
    """JSON-safe copy: NaN/inf become None, enums become their values."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if hasattr(obj, "value") and not isinstance(obj, (int, float, str)):
        return obj.value
    if isinstance(obj, (np.floating, np.integer)):
        return _clean(obj.item())
    return obj


def _write_csv(path, header, rows, provenance=()):
    with open(path, "w", newline="") as fh:
        fh.write(f"# parablow {__version__}\n")
        for line in provenance:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_f(x) for x in row])


def _write_json(path, payload):
    Path(path).write_text(json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n")


def read_csv(path, required=()):
    """Return {column: float array} from a '#'-commented CSV."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#") and ln.strip()]
    if not lines:
        raise ConfigError(f"{path}: no header row")
    reader = csv.reader(lines)
    header = [h.strip() for h in next(reader)]
    missing = [c for c in required if c not in header]
    if missing:
        raise ConfigError(f"{path}: missing column(s) {', '.join(missing)}")
    rows = list(reader)
    cols = {h: np.empty(len(rows)) for h in header}
    for i, row in enumerate(rows, 2):
        if len(row) != len(header):
            raise ConfigError(f"{path}: data row {i - 1} has {len(row)} fields, header has {len(header)}")
        for h, val in zip(header, row):
            try:
                cols[h][i - 2] = float(val)
            except ValueError:
                raise ConfigError(f"{path}: column {h!r}, data row {i - 1}: not a number ({val!r})") from None
    return cols


# ---------------------------------------------------------------------------
# run


def initial_state(cfg):
    state = build(cfg.init, cfg.grid())
    if cfg.omega_offset:
        state = shifted(state, cfg.omega_offset)
    return state


def read_snapshot(path, n=None):
    cols = read_csv(path, SNAPSHOT_HEADER)
    t = cols["t"]
    if t.size == 0 or np.any(t != t[0]):
        raise ConfigError(f"{path}: column 't' must hold one time for all rows")
    if n is not None and t.size != n:
        raise ConfigError(f"{path}: snapshot has {t.size} rows but the grid has n={n}")
    return State(float(t[0]), cols["v"], cols["omega"])


def write_snapshot(path, state, grid, provenance=()):
    rows = zip(np.full(state.n, state.time), grid.x, state.v, state.omega)
    _write_csv(path, SNAPSHOT_HEADER, rows, provenance)


def analyse(cfg, initial, outcome, grid):
    """Regime, oracle closed form, blow-up fit and oracle comparison for one run."""
    params = cfg.params
    regime = classify_regime(params, initial, grid)
    out = {
        "regime": regime.label.value,
        "hypotheses": [[name, bool(ok)] for name, ok in regime.hypothesis_report],
        "verdict": None,
    }
    if not regime.applies:
        out["note"] = "no theorem applies"
        return out
    v1 = grid.trace_at_zero(initial.v, 1)
    o2 = grid.trace_at_zero(initial.omega, 2)
    try:
        cf = closed_form(params, ReducedState(initial.time, v1, o2), regime.label)
    except NoClosedForm as exc:
        out["note"] = str(exc)
        out["verdict"] = Verdict.INCONCLUSIVE.value
        return out
    out["closed_form"] = {"case": cf.case_label.value, "kind": cf.kind, "singular_time": cf.singular_time}

    trace = outcome.trace
    tails = np.array([r.spectral_tail for r in outcome.reports]) if outcome.reports else None
    if cf.kind == "exact" and cf.singular_time is not None:
        # no classical solution exists past the oracle's singular time
        keep = trace.t < cf.singular_time
        trace = PointTrace.from_arrays(trace.t[keep], trace.v_derivs[keep], trace.omega_derivs[keep])
        tails = tails[keep] if tails is not None else None
    if len(trace) >= 2:
        out["comparison"] = compare_with_oracle(trace, cf, params, cfg.omega2_cap).as_dict()
    fc = FitConfig(rel_tol=cfg.rel_tol, growth_factor=cfg.growth_factor)
    try:
        est = fit_blowup(trace, fc, cf, tails)
    except (InsufficientGrowth, ValueError) as exc:
        out["note"] = f"fit skipped: {exc}"
        out["verdict"] = Verdict.INCONCLUSIVE.value
        return out
    out["estimate"] = est.as_dict()
    out["verdict"] = est.verdict.value
    return out


def execute(cfg, initial=None, out_dir=None, prefix=None):
    """Run one configuration and write its files; returns the JSON summary."""
    grid = cfg.grid()
    if initial is None:
        initial = initial_state(cfg)
    prefix = prefix or cfg.prefix
    outcome = run(
        cfg.params,
        initial,
        cfg.control,
        grid=grid,
        form=cfg.form,
        frozen_omega=cfg.frozen_omega,
    )
    analysis = analyse(cfg, initial, outcome, grid)
    prov = cfg.provenance()

    rows = []
    for t, vr, orow, rep in zip(outcome.trace.times, outcome.trace.v_rows, outcome.trace.omega_rows, outcome.reports):
        rows.append(
            (t, rep.e0, rep.e2, rep.l1_omega, rep.dissipation_v, rep.dissipation_omega)
            + tuple(vr)
            + tuple(orow)
            + (rep.min_omega, rep.sym_odd, rep.sym_even, rep.spectral_tail)
        )
    files = {}
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        files = {
            "diagnostics": str(out_dir / f"{prefix}_diagnostics.csv"),
            "trace": str(out_dir / f"{prefix}_trace.csv"),
            "snapshot": str(out_dir / f"{prefix}_snapshot.csv"),
            "summary": str(out_dir / f"{prefix}_summary.json"),
        }
        _write_csv(files["diagnostics"], CSV_HEADER, rows, prov)
        trace_rows = [(t,) + tuple(v) + tuple(o) for t, v, o in zip(outcome.trace.times, outcome.trace.v_rows, outcome.trace.omega_rows)]
        _write_csv(files["trace"], TRACE_HEADER, trace_rows, prov)
        write_snapshot(files["snapshot"], outcome.final_state, grid, prov)

    final = outcome.reports[-1].as_dict() if outcome.reports else {}
    summary = {
        "version": __version__,
        "config": cfg.resolved,
        "halt_reason": outcome.halt_reason.value,
        "steps": outcome.steps,
        "initial_time": initial.time,
        "final_time": outcome.final_state.time,
        "final_energies": final,
        **analysis,
        "files": {k: Path(v).name for k, v in files.items()},
    }
    summary["exit_status"] = exit_status(summary)
    if files:
        _write_json(files["summary"], summary)
    summary["paths"] = files
    return summary


def exit_status(summary):
    verdict = summary.get("verdict")
    halt = summary.get("halt_reason")
    if halt == HaltReason.NON_FINITE.value or verdict == Verdict.VIOLATION.value:
        return EXIT_FAIL
    if verdict in GOOD_VERDICTS or halt == HaltReason.REACHED_T_END.value:
        return EXIT_OK
    return EXIT_UNDECIDED


def _brief(summary):
    keys = ("regime", "halt_reason", "final_time", "verdict", "note")
    return {k: summary.get(k) for k in keys if summary.get(k) is not None}


def cmd_run(args):
    cfg = load_config(args.config)
    summary = execute(cfg, out_dir=cfg.output_path(args.output_dir))
    print(json.dumps(_clean({**_brief(summary), "files": summary["files"]}), indent=2))
    return summary["exit_status"]


def cmd_snapshot_resume(args):
    cfg = load_config(args.config)
    initial = read_snapshot(args.snapshot, cfg.n)
    summary = execute(cfg, initial=initial, out_dir=cfg.output_path(args.output_dir), prefix=args.prefix or f"{cfg.prefix}_resumed")
    print(json.dumps(_clean({**_brief(summary), "files": summary["files"]}), indent=2))
    return summary["exit_status"]


# ---------------------------------------------------------------------------
# sweep

SWEEP_HEADER = [
    "alpha",
    "beta",
    "v_amplitude",
    "omega_amplitude",
    "regime",
    "halt_reason",
    "final_time",
    "t0_hat",
    "exponent_hat",
    "reference_t0",
    "verdict",
    "error",
]


def _sweep_one(job):
    cfg, combo, out_dir, prefix = job
    a, b, va, wa = combo
    row = {"alpha": a, "beta": b, "v_amplitude": va, "omega_amplitude": wa}
    try:
        sub = cfg.with_case(a, b, va, wa, prefix)
        s = execute(sub, out_dir=out_dir, prefix=prefix)
        est = s.get("estimate") or {}
        row.update(
            regime=s["regime"],
            halt_reason=s["halt_reason"],
            final_time=s["final_time"],
            t0_hat=est.get("t0_hat"),
            exponent_hat=est.get("exponent_hat"),
            reference_t0=(s.get("closed_form") or {}).get("singular_time"),
            verdict=s["verdict"] or s.get("note", ""),
        )
    except (ParablowError, ValueError, FloatingPointError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return _f(v)
    return str(v)


def sweep(cfg, out_dir, workers=None):
    if cfg.sweep is None:
        raise ConfigError("config has no [sweep] section")
    combos = cfg.sweep.combinations()
    if not combos:
        raise ConfigError("[sweep] lists are empty")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(cfg, c, out_dir, f"{cfg.prefix}_{i:03d}") for i, c in enumerate(combos)]
    workers = workers or cfg.sweep.workers
    if workers == 1:
        rows = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    path = out_dir / f"{cfg.prefix}_sweep.csv"
    with open(path, "w", newline="") as fh:
        fh.write(f"# parablow {__version__}\n")
        for line in cfg.provenance():
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for r in rows:
            w.writerow([_cell(r.get(k)) for k in SWEEP_HEADER])
    return path, rows


def cmd_sweep(args):
    cfg = load_config(args.config)
    path, rows = sweep(cfg, cfg.output_path(args.output_dir), args.workers)
    for r in rows:
        print(",".join(_cell(r.get(k)) for k in SWEEP_HEADER))
    print(f"wrote {path}")
    failed = any(r.get("error") or r.get("verdict") == Verdict.VIOLATION.value for r in rows)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# oracle, identities, fit

_CASE_DEFAULTS = {
    RegimeLabel.NC_CASE1: (1.0, 2.0, False),
    RegimeLabel.NC_CASE2: (1.0, 1.0, False),
    RegimeLabel.NC_CASE3: (2.0, 1.0, False),
    RegimeLabel.C_THM_A: (2.0, 1.0, True),
    RegimeLabel.C_THM_B_A: (2.0, 1.0, True),
    RegimeLabel.C_THM_B_B: (1.0, 1.0, True),
}


def _params_for(case, args):
    a, b, conv = _CASE_DEFAULTS.get(case, (1.0, 1.0, False)) if case is not None else (1.0, 1.0, False)
    return ModelParams(
        args.alpha if args.alpha is not None else a,
        args.beta if args.beta is not None else b,
        args.kappa0,
        args.convective if args.convective is not None else conv,
    )


def cmd_oracle(args):
    case = RegimeLabel(args.case) if args.case else None
    params = _params_for(case, args)
    rs = ReducedState(0.0, args.v1, args.omega2)
    out = {"params": {"alpha": params.alpha, "beta": params.beta, "kappa0": params.kappa0, "convective": params.convective}}
    try:
        cf = closed_form(params, rs, case)
        v1, o2 = cf(np.array([args.t]))
        out.update(
            case=cf.case_label.value,
            kind=cf.kind,
            t=args.t,
            V1=float(v1[0]),
            Omega2=float(o2[0]),
            singular_time=cf.singular_time,
        )
    except NoClosedForm as exc:
        out["note"] = str(exc)
    if args.integrate or "Omega2" not in out:
        series = integrate_reduced(params, rs, args.t, tol=args.tol)
        v1, o2 = series.at([series.t[-1]])
        out["integrated"] = {"t": float(series.t[-1]), "V1": float(v1[0]), "Omega2": float(o2[0]), "status": series.status}
    print(json.dumps(_clean(out), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_check_identities(args):
    params = ModelParams(args.alpha, args.beta, args.kappa0)
    sampler = TestFunctionSampler(seed=args.seed, max_degree=args.degree)
    reports = []
    ok = True
    for case in args.case or [c.value for c in ExpansionName]:
        rep = check_expansion(case, params, sampler, trials=args.trials, n=args.n, n_sigma=args.n_sigma)
        d = rep.as_dict()
        d["ok"] = rep.max_residual < args.tol
        ok &= d["ok"]
        reports.append(d)
    out = {"expansions": reports, "tolerance": args.tol}
    if args.interpolation:
        h2 = check_interpolation(Inequality.H2_INTERP, TestFunctionSampler(args.seed, 20), trials=1000)
        out["interpolation"] = h2.as_dict()
        ok &= h2.violations == 0
    if args.sigma:
        scan = scan_sigma_constraints()
        out["sigma"] = {
            "n2_alpha1_beta1": check_sigma_constraints(2, 1, 1).all_hold,
            "rejects_alpha1": {n: check_sigma_constraints(n, 1, 1).failing() for n in range(3, 7)},
            "min_alpha": {n: str(v) for n, v in scan.min_alpha.items()},
            "min_beta": {n: str(v) for n, v in scan.min_beta.items()},
        }
    print(json.dumps(_clean(out), indent=2, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fit(args):
    cols = read_csv(args.trace, ("t", "V1", "O2"))
    m = cols["t"].size
    v = np.column_stack([cols.get(f"V{j}", np.zeros(m)) for j in range(4)])
    o = np.column_stack([cols.get(f"O{j}", np.zeros(m)) for j in range(4)])
    trace = PointTrace.from_arrays(cols["t"], v, o)
    cf = None
    if args.case:
        case = RegimeLabel(args.case)
        params = _params_for(case, args)
        cf = closed_form(params, ReducedState(float(cols["t"][0]), float(cols["V1"][0]), float(cols["O2"][0])), case)
        if cf.kind == "exact" and cf.singular_time is not None:
            keep = trace.t < cf.singular_time
            trace = PointTrace.from_arrays(trace.t[keep], trace.v_derivs[keep], trace.omega_derivs[keep])
    tails = cols.get("spectral_tail")
    est = fit_blowup(trace, FitConfig(rel_tol=args.rel_tol, growth_factor=args.growth_factor), cf, tails)
    out = est.as_dict()
    out = {k: out[k] for k in ("case", "t0_hat", "exponent_hat", "residual", "verdict", "tolerances", "fit_window", "reference_t0", "spectral_tail_at_window_end")}
    print(json.dumps(_clean(out), indent=2, sort_keys=True))
    return EXIT_FAIL if est.verdict is Verdict.VIOLATION else EXIT_OK


# ---------------------------------------------------------------------------


def _add_params(p, kappa_default=1.0):
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--kappa0", type=float, default=kappa_default)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--convective", dest="convective", action="store_true", default=None)
    g.add_argument("--no-convective", dest="convective", action="store_false")


def build_parser():
    ap = argparse.ArgumentParser(prog="parablow", description=__doc__)
    ap.add_argument("--version", action="version", version=f"parablow {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="one PDE run from a config file")
    p.add_argument("config")
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="cartesian parameter sweep")
    p.add_argument("config")
    p.add_argument("--output-dir", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("snapshot-resume", help="continue a run from a snapshot CSV")
    p.add_argument("config")
    p.add_argument("snapshot")
    p.add_argument("--output-dir", default=None)
    p.add_argument("--prefix", default=None)
    p.set_defaults(func=cmd_snapshot_resume)

    p = sub.add_parser("oracle", help="reduced ODE values at x = 0")
    p.add_argument("--case", choices=[c.value for c in RegimeLabel if c is not RegimeLabel.NONE])
    p.add_argument("--v1", type=float, required=True)
    p.add_argument("--omega2", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--integrate", action="store_true", help="also integrate the ODEs numerically")
    p.add_argument("--tol", type=float, default=1e-10)
    _add_params(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check-identities", help="randomised checks of the derivative expansions")
    p.add_argument("--case", action="append", choices=[c.value for c in ExpansionName])
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--kappa0", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--n-sigma", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--interpolation", action="store_true")
    p.add_argument("--sigma", action="store_true")
    p.set_defaults(func=cmd_check_identities)

    p = sub.add_parser("fit", help="fit a blow-up law to a trace CSV")
    p.add_argument("trace")
    p.add_argument("--case", choices=[c.value for c in RegimeLabel if c is not RegimeLabel.NONE])
    p.add_argument("--rel-tol", type=float, default=0.02)
    p.add_argument("--growth-factor", type=float, default=10.0)
    _add_params(p)
    p.set_defaults(func=cmd_fit)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParablowError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
