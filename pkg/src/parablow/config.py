"""INI run configuration with field-level validation."""
import configparser
import os
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from .exceptions import ConfigError
from .grid import PeriodicGrid
from .integrator import StepControl
from .model import ModelParams
from .scenarios import PRESETS, InitPreset

OUTPUT_ENV = "PARABLOW_OUTPUT_DIR"

_SCHEMA = {
    "model": {"alpha": float, "beta": float, "kappa0": float, "convective": bool},
    "grid": {"n": int, "dealias": str},
    "step": {
        "cfl": float,
        "dt_min": float,
        "dt_max": float,
        "t_end": float,
        "stop_threshold": float,
        "sample_interval": float,
    },
    "init": {
        "preset": str,
        "v_amplitude": float,
        "omega_amplitude": float,
        "sine": str,
        "cosine": str,
        "omega_offset": float,
    },
    "run": {"seed": int, "form": str, "frozen_omega": bool},
    "analysis": {"rel_tol": float, "growth_factor": float, "omega2_cap": float},
    "output": {"dir": str, "prefix": str},
    "sweep": {"alpha": str, "beta": str, "v_amplitude": str, "omega_amplitude": str, "workers": int},
}


@dataclass(frozen=True)
class SweepSpec:
    alpha: tuple
    beta: tuple
    v_amplitude: tuple
    omega_amplitude: tuple
    workers: int = 2

    def combinations(self):
        return [
            (a, b, va, wa)
            for a in self.alpha
            for b in self.beta
            for va in self.v_amplitude
            for wa in self.omega_amplitude
        ]


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams = ModelParams()
    n: int = 256
    dealias: str = "truncate"
    control: StepControl = StepControl()
    init: InitPreset = InitPreset()
    omega_offset: float = 0.0
    seed: int = 0
    form: str = "original"
    frozen_omega: bool = False
    rel_tol: float = 0.02
    growth_factor: float = 10.0
    omega2_cap: float = 1e3
    output_dir: Optional[str] = None
    prefix: str = "run"
    sweep: Optional[SweepSpec] = None
    source: Optional[str] = None
    resolved: dict = field(default_factory=dict, compare=False)

    def grid(self):
        return PeriodicGrid(self.n, self.dealias)

    def output_path(self, override=None):
        base = override or self.output_dir or os.environ.get(OUTPUT_ENV) or "parablow-out"
        return Path(base)

    def provenance(self):
        """Comment lines embedding the full resolved config."""
        lines = []
        for section, items in self.resolved.items():
            lines.append(f"[{section}]")
            lines.extend(f"{k} = {v}" for k, v in items.items())
        return lines

    def with_case(self, alpha, beta, v_amplitude, omega_amplitude, prefix=None):
        """Copy with one sweep combination substituted."""
        params = replace(self.params, alpha=alpha, beta=beta)
        init = replace(self.init, v_amplitude=v_amplitude, omega_amplitude=omega_amplitude)
        res = {k: dict(v) for k, v in self.resolved.items() if k != "sweep"}
        res.setdefault("model", {}).update(alpha=_fmt(alpha), beta=_fmt(beta))
        res.setdefault("init", {}).update(v_amplitude=_fmt(v_amplitude), omega_amplitude=_fmt(omega_amplitude))
        return replace(self, params=params, init=init, sweep=None, resolved=res, prefix=prefix or self.prefix)


def _fmt(x):
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def _line_of(text, section, key=None):
    """1-based line number of a section header or of a key inside it."""
    if text is None:
        return None
    current = None
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip().lower()
            if key is None and current == section:
                return i
            continue
        if key is not None and current == section:
            k = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
            if k == key:
                return i
    return None


def _where(text, section, key=None):
    ln = _line_of(text, section, key)
    name = f"[{section}]" + (f" {key}" if key else "")
    return f"line {ln}: {name}" if ln else name


def _parse_bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_list(s, conv=float):
    items = [p.strip() for p in s.replace(";", ",").split(",") if p.strip()]
    return tuple(conv(p) for p in items)


def parse_modes(s):
    """'1:0.5, 2:-0.1' -> ((1, 0.5), (2, -0.1))."""
    out = []
    for item in _parse_list(s, str):
        k, _, c = item.partition(":")
        if not c:
            raise ValueError(f"mode {item!r} must look like k:coefficient")
        out.append((int(k), float(c)))
    if not out:
        raise ValueError("empty mode list")
    return tuple(out)


def _convert(kind, raw):
    if kind is bool:
        return _parse_bool(raw)
    return kind(raw.strip())


def load_config(path=None, text=None):
    """Read and validate a config file (or text).  Raises ConfigError."""
    if text is None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=str(path or "<string>"))
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    values = {}
    for section in cp.sections():
        sec = section.lower()
        if sec not in _SCHEMA:
            raise ConfigError(f"{_where(text, sec)}: unknown section")
        values[sec] = {}
        for key, raw in cp.items(section):
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"{_where(text, sec, key)}: unknown key")
            try:
                values[sec][key] = _convert(_SCHEMA[sec][key], raw)
            except ValueError as exc:
                raise ConfigError(f"{_where(text, sec, key)}: {exc}") from exc

    def get(sec, key, default):
        return values.get(sec, {}).get(key, default)

    def guarded(sec, keys, build):
        try:
            return build()
        except (ValueError, TypeError) as exc:
            msg = str(exc)
            hit = next((k for k in keys if re.search(rf"\b{k}\b", msg)), None)
            raise ConfigError(f"{_where(text, sec, hit)}: {msg}") from exc

    # an init preset name seeds model and init defaults
    base_params, base_init = ModelParams(), InitPreset()
    name = get("init", "preset", None)
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"{_where(text, 'init', 'preset')}: unknown preset {name!r}; choose from {sorted(PRESETS)}")
        base_params, base_init = PRESETS[name].params, PRESETS[name].preset

    m = values.get("model", {})
    params = guarded(
        "model",
        ("alpha", "beta", "kappa0"),
        lambda: ModelParams(
            m.get("alpha", base_params.alpha),
            m.get("beta", base_params.beta),
            m.get("kappa0", base_params.kappa0),
            m.get("convective", base_params.convective),
        ),
    )
    n = get("grid", "n", 256)
    dealias = get("grid", "dealias", "truncate")
    guarded("grid", ("n", "dealias"), lambda: PeriodicGrid(n, dealias))

    s = values.get("step", {})
    control = guarded("step", tuple(_SCHEMA["step"]), lambda: StepControl(**s))

    i = values.get("init", {})
    try:
        sine = parse_modes(i["sine"]) if "sine" in i else base_init.sine_coeffs
    except ValueError as exc:
        raise ConfigError(f"{_where(text, 'init', 'sine')}: {exc}") from exc
    try:
        cosine = parse_modes(i["cosine"]) if "cosine" in i else base_init.cosine_coeffs
    except ValueError as exc:
        raise ConfigError(f"{_where(text, 'init', 'cosine')}: {exc}") from exc
    init = InitPreset(
        name or base_init.name,
        i.get("v_amplitude", base_init.v_amplitude),
        i.get("omega_amplitude", base_init.omega_amplitude),
        sine,
        cosine,
    )

    form = get("run", "form", "original")
    if form not in ("original", "good"):
        raise ConfigError(f"{_where(text, 'run', 'form')}: form must be 'original' or 'good'")
    rel_tol = get("analysis", "rel_tol", 0.02)
    growth = get("analysis", "growth_factor", 10.0)
    cap = get("analysis", "omega2_cap", 1e3)
    for key, val in (("rel_tol", rel_tol), ("growth_factor", growth), ("omega2_cap", cap)):
        if not val > 0:
            raise ConfigError(f"{_where(text, 'analysis', key)}: must be > 0")

    sweep = None
    if "sweep" in values:
        sw = values["sweep"]
        lists = {}
        for key, default in (
            ("alpha", (params.alpha,)),
            ("beta", (params.beta,)),
            ("v_amplitude", (init.v_amplitude,)),
            ("omega_amplitude", (init.omega_amplitude,)),
        ):
            if key in sw:
                try:
                    lists[key] = _parse_list(sw[key])
                except ValueError as exc:
                    raise ConfigError(f"{_where(text, 'sweep', key)}: {exc}") from exc
                if not lists[key]:
                    raise ConfigError(f"{_where(text, 'sweep', key)}: empty list")
            else:
                lists[key] = default
        workers = sw.get("workers", 2)
        if workers < 1:
            raise ConfigError(f"{_where(text, 'sweep', 'workers')}: must be >= 1")
        sweep = SweepSpec(workers=workers, **lists)

    cfg = RunConfig(
        params=params,
        n=n,
        dealias=dealias,
        control=control,
        init=init,
        omega_offset=i.get("omega_offset", 0.0),
        seed=get("run", "seed", 0),
        form=form,
        frozen_omega=get("run", "frozen_omega", False),
        rel_tol=rel_tol,
        growth_factor=growth,
        omega2_cap=cap,
        output_dir=get("output", "dir", None),
        prefix=get("output", "prefix", "run"),
        sweep=sweep,
        source=str(path) if path else None,
    )
    return replace(cfg, resolved=_resolve(cfg))


def _resolve(cfg):
    p, c, i = cfg.params, cfg.control, cfg.init
    res = {
        "model": {f.name: _fmt(getattr(p, f.name)) for f in fields(p)},
        "grid": {"n": str(cfg.n), "dealias": cfg.dealias},
        "step": {f.name: _fmt(getattr(c, f.name)) for f in fields(c)},
        "init": {
            "preset": i.name,
            "v_amplitude": _fmt(float(i.v_amplitude)),
            "omega_amplitude": _fmt(float(i.omega_amplitude)),
            "sine": ", ".join(f"{k}:{_fmt(v)}" for k, v in i.sine_modes()),
            "cosine": ", ".join(f"{k}:{_fmt(v)}" for k, v in i.cosine_modes()),
            "omega_offset": _fmt(float(cfg.omega_offset)),
        },
        "run": {"seed": str(cfg.seed), "form": cfg.form, "frozen_omega": str(cfg.frozen_omega)},
        "analysis": {
            "rel_tol": _fmt(float(cfg.rel_tol)),
            "growth_factor": _fmt(float(cfg.growth_factor)),
            "omega2_cap": _fmt(float(cfg.omega2_cap)),
        },
        "output": {"prefix": cfg.prefix},
    }
    if cfg.sweep is not None:
        s = cfg.sweep
        res["sweep"] = {
            "alpha": ", ".join(map(_fmt, s.alpha)),
            "beta": ", ".join(map(_fmt, s.beta)),
            "v_amplitude": ", ".join(map(_fmt, s.v_amplitude)),
            "omega_amplitude": ", ".join(map(_fmt, s.omega_amplitude)),
            "workers": str(s.workers),
        }
    return res
