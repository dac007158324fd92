import csv
import json

import numpy as np
import pytest

from parablow.cli import EXIT_FAIL, EXIT_OK, EXIT_UNDECIDED, EXIT_USAGE, main, read_csv
from parablow.config import OUTPUT_ENV, load_config, parse_modes
from parablow.exceptions import ConfigError

DIAG_HEADER = "t,e0,e2,l1_omega,diss_v,diss_omega,V0,V1,V2,V3,O0,O1,O2,O3,min_omega,sym_odd,sym_even,spectral_tail"

SMALL = """
[model]
alpha = 2
beta = 1
kappa0 = 1
[grid]
n = 64
[step]
t_end = {t_end}
sample_interval = 0.01
[init]
preset = nc-case3
[output]
prefix = small
"""


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _header(path):
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return lines[0].strip()


def test_run_writes_outputs(tmp_path, capsys):
    cfg = _write(tmp_path, SMALL.format(t_end=0.05))
    code = main(["run", cfg, "--output-dir", str(tmp_path / "out")])
    assert code in (EXIT_OK, EXIT_UNDECIDED)
    out = tmp_path / "out"
    assert _header(out / "small_diagnostics.csv") == DIAG_HEADER
    first = (out / "small_diagnostics.csv").read_text().splitlines()[0]
    assert first.startswith("# parablow")
    text = (out / "small_diagnostics.csv").read_text()
    assert "alpha" in text.split(DIAG_HEADER)[0]
    summary = json.loads((out / "small_summary.json").read_text())
    assert summary["regime"] == "NC-Case3"
    assert summary["halt_reason"] == "ReachedTEnd"
    assert json.loads(capsys.readouterr().out)["files"]
    cols = read_csv(out / "small_trace.csv", ("t", "O2"))
    assert cols["t"][-1] == pytest.approx(0.05)


def test_run_is_deterministic(tmp_path):
    cfg = _write(tmp_path, SMALL.format(t_end=0.03))
    main(["run", cfg, "--output-dir", str(tmp_path / "a")])
    main(["run", cfg, "--output-dir", str(tmp_path / "b")])
    for name in ("small_diagnostics.csv", "small_trace.csv", "small_snapshot.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_t_end_zero(tmp_path):
    cfg = _write(tmp_path, SMALL.format(t_end=0.0))
    code = main(["run", cfg, "--output-dir", str(tmp_path)])
    assert code == EXIT_OK
    cols = read_csv(tmp_path / "small_diagnostics.csv", ("t",))
    assert cols["t"].size == 1 and cols["t"][0] == 0.0


def test_output_env(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "env"))
    cfg = _write(tmp_path, SMALL.format(t_end=0.0))
    main(["run", cfg])
    assert (tmp_path / "env" / "small_summary.json").exists()


def test_snapshot_resume(tmp_path):
    cfg = _write(tmp_path, SMALL.format(t_end=0.02))
    main(["run", cfg, "--output-dir", str(tmp_path)])
    code = main(["snapshot-resume", cfg, str(tmp_path / "small_snapshot.csv"), "--output-dir", str(tmp_path)])
    assert code in (EXIT_OK, EXIT_UNDECIDED)
    cols = read_csv(tmp_path / "small_resumed_trace.csv", ("t",))
    assert cols["t"][0] == pytest.approx(0.02) and cols["t"][-1] == pytest.approx(0.04)


def test_config_errors(tmp_path, capsys):
    bad = _write(tmp_path, "[model]\nalpha = 0.5\n")
    assert main(["run", bad]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "line 2" in err and "alpha" in err
    with pytest.raises(ConfigError, match="unknown"):
        load_config(text="[model]\ngamma = 1\n")
    with pytest.raises(ConfigError, match="unknown"):
        load_config(text="[nonsense]\n")
    with pytest.raises(ConfigError):
        load_config(text="[grid]\nn = 63\n")


def test_parse_modes():
    assert parse_modes("1:0.5, 2:-0.1") == ((1, 0.5), (2, -0.1))
    with pytest.raises(ValueError):
        parse_modes("1-0.5")
    with pytest.raises(ConfigError, match="line 2"):
        load_config(text="[init]\nsine = 1-0.5\n")


def test_oracle(capsys):
    assert main(["oracle", "--case", "NC-Case3", "--v1", "1", "--omega2", "1", "--t", "0.2"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["Omega2"] == pytest.approx(2.5)
    assert out["singular_time"] == pytest.approx(1 / 3)


def test_oracle_integrate(capsys):
    main(["oracle", "--case", "NC-Case1", "--v1", "2", "--omega2", "1", "--t", "0.2", "--integrate"])
    out = json.loads(capsys.readouterr().out)
    assert out["integrated"]["Omega2"] - 0.5 * out["integrated"]["V1"] ** 2 == pytest.approx(-1.0, abs=1e-7)


def test_check_identities(capsys):
    code = main(["check-identities", "--case", "F", "--case", "V_X", "--trials", "5", "--n", "256", "--sigma"])
    assert code == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert [r["case"] for r in out["expansions"]] == ["F", "V_X"]
    assert out["sigma"]["n2_alpha1_beta1"] is True


def test_check_identities_budget_error(capsys):
    assert main(["check-identities", "--case", "F", "--alpha", "2", "--degree", "40", "--n", "64"]) == EXIT_FAIL
    assert "DegreeBudgetExceeded" in capsys.readouterr().err


def _trace_csv(path, t, o2):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "V1", "O2"])
        for a, b in zip(t, o2):
            w.writerow([repr(float(a)), 1.0, repr(float(b))])


def test_fit_synthetic(tmp_path, capsys):
    t = np.linspace(0, 0.3, 301)
    _trace_csv(tmp_path / "tr.csv", t, 1 / (1 - 3 * t))
    assert main(["fit", str(tmp_path / "tr.csv"), "--case", "NC-Case3"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "MatchesOracle"
    assert out["t0_hat"] == pytest.approx(1 / 3, rel=1e-6)


def test_fit_constant_trace_fails(tmp_path, capsys):
    t = np.linspace(0, 1, 50)
    _trace_csv(tmp_path / "flat.csv", t, np.ones_like(t))
    assert main(["fit", str(tmp_path / "flat.csv")]) != EXIT_OK
    assert "InsufficientGrowth" in capsys.readouterr().err


def test_fit_missing_column(tmp_path, capsys):
    (tmp_path / "x.csv").write_text("t,V1\n0,1\n")
    assert main(["fit", str(tmp_path / "x.csv")]) != EXIT_OK
    assert "O2" in capsys.readouterr().err


SWEEP = """
[grid]
n = 32
[step]
t_end = 0.02
sample_interval = 0.01
[init]
preset = nc-case3
[output]
prefix = sw
[sweep]
alpha = 1, 2
beta = 1, 2
v_amplitude = 2
omega_amplitude = 1
workers = 2
"""


def test_sweep_deterministic(tmp_path):
    cfg = _write(tmp_path, SWEEP)
    assert main(["sweep", cfg, "--output-dir", str(tmp_path / "a")]) == EXIT_OK
    assert main(["sweep", cfg, "--output-dir", str(tmp_path / "b"), "--workers", "1"]) == EXIT_OK
    a = (tmp_path / "a" / "sw_sweep.csv").read_text()
    assert a == (tmp_path / "b" / "sw_sweep.csv").read_text()
    rows = [r for r in csv.DictReader(ln for ln in a.splitlines() if not ln.startswith("#"))]
    assert len(rows) == 4
    regimes = {(r["alpha"], r["beta"]): r["regime"] for r in rows}
    assert regimes[("1", "1")] == "NC-Case2"
    assert regimes[("2", "1")] == "NC-Case3"


def test_sweep_empty_list(tmp_path):
    cfg = _write(tmp_path, SWEEP.replace("alpha = 1, 2", "alpha ="))
    assert main(["sweep", cfg, "--output-dir", str(tmp_path)]) == EXIT_USAGE
