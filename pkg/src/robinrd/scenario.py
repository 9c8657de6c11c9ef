"""Configuration, experiment orchestration and artifact output.

A config is a TOML document with the sections ``grid``, ``params``,
``initial``, ``control``, ``diagnostics``, ``eigen`` and ``output``. Unknown
keys are rejected; every default that gets filled in is recorded in the run
manifest so that the manifest alone reproduces a run.
"""
from __future__ import annotations

import copy
import csv
import io
import json
import logging
import math
import os
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .diagnostics import (
    ALL_CHECKS,
    CheckSettings,
    DiagnosticsRecord,
    Sampler,
    SchemaError,
    emit_records,
    read_records,
    report_json,
    run_checks,
)
from .mesh import Grid, build_interval, build_rectangle
from .operator import assemble
from .spectral import EigenError, EigenPair, first_eigenpair, poincare_friedrichs_constant, robin_eigenvalue_interval
from .stepper import ModelParams, StepControl, SystemState, Trajectory, model_operators, run

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger(__name__)

PRESETS = ("constant", "gaussian_bump", "eigenfunction_multiple", "from_file")
OUTCOMES = ("global", "blowup")

DEFAULTS: dict = {
    "grid": {"dim": 1, "counts": [65], "extents": [1.0]},
    "params": {"a": 1.0, "b": 1.0, "alpha": 1.0, "beta": 1.0, "gamma_bc": 2.0},
    "initial": {
        "preset": "constant",
        "amplitude": 1.0,
        "u1_factor": 1.0,
        "u2_factor": 1.0,
        "center": [],  # empty: domain center
        "width": 0.1,
        "file": "",
    },
    "control": {
        "dt_init": 1e-3,
        "dt_min": 1e-9,
        "dt_max": 1e-2,
        "safety": 0.9,
        "blowup_threshold": 1e8,
        "t_end": 10.0,
        "expected_outcome": "global",
    },
    "diagnostics": {
        "sample_every": 0.05,
        "r_list": [2, 4, 8, 16],
        "checks": list(ALL_CHECKS),
        "s0": "auto",
        "tol_factor": 10.0,
    },
    "eigen": {"robin_coefficient": "auto", "tol": 1e-10, "max_iter": 10_000},
    "output": {"directory": "rd_out", "formats": ["csv", "json"], "gnuplot": True},
}


class ConfigError(ValueError):
    pass


@dataclass
class SimConfig:
    raw: dict  # fully resolved, defaults included
    grid: Grid
    params: ModelParams
    control: StepControl
    expected_outcome: str
    defaults_filled: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    base_dir: Path = field(default_factory=Path.cwd)

    @property
    def initial(self) -> dict:
        return self.raw["initial"]

    @property
    def diagnostics(self) -> dict:
        return self.raw["diagnostics"]

    @property
    def eigen(self) -> dict:
        return self.raw["eigen"]

    @property
    def output(self) -> dict:
        return self.raw["output"]


def _merge(user: dict, defaults: dict, path: str, filled: list) -> dict:
    out = {}
    for key, value in user.items():
        if key not in defaults:
            where = f"{path}.{key}" if path else key
            raise ConfigError(f"unknown config key {where!r}")
    for key, default in defaults.items():
        where = f"{path}.{key}" if path else key
        if key not in user and not isinstance(default, dict):
            filled.append(where)
            out[key] = copy.deepcopy(default)
        elif isinstance(default, dict):
            if key not in user:
                out[key] = _merge({}, default, where, filled)
                continue
            if not isinstance(user[key], dict):
                raise ConfigError(f"{where} must be a table")
            out[key] = _merge(user[key], default, where, filled)
        else:
            out[key] = user[key]
    return out


def _num(raw: dict, section: str, key: str, integer: bool = False):
    value = raw[section][key]
    ok = isinstance(value, int) if integer else isinstance(value, (int, float))
    if isinstance(value, bool) or not ok:
        kind = "an integer" if integer else "a number"
        raise ConfigError(f"{section}.{key} must be {kind}, got {value!r}")
    return value if integer else float(value)


def build_config(data: dict, base_dir: Path | None = None) -> SimConfig:
    """Validate a config mapping (already parsed) and fill defaults."""
    filled: list = []
    raw = _merge(data, DEFAULTS, "", filled)
    warnings = []

    g = raw["grid"]
    dim = _num(raw, "grid", "dim", integer=True)
    counts, extents = g["counts"], g["extents"]
    if dim not in (1, 2):
        raise ConfigError("grid.dim must be 1 or 2")
    if not isinstance(counts, list) or len(counts) != dim or not all(isinstance(n, int) for n in counts):
        raise ConfigError(f"grid.counts must be a list of {dim} integers")
    if not isinstance(extents, list) or len(extents) != dim:
        raise ConfigError(f"grid.extents must be a list of {dim} numbers")
    try:
        grid = build_interval(counts[0], extents[0]) if dim == 1 else build_rectangle(*counts, *extents)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"grid: {exc}") from None

    try:
        params = ModelParams(**{k: _num(raw, "params", k) for k in raw["params"]})
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not params.main_regime:
        msg = (f"outside main-theorem regime alpha <= 2*beta (alpha={params.alpha}, beta={params.beta}); "
               "the global bounds are not guaranteed")
        warnings.append(msg)
        log.warning(msg)

    ctrl = raw["control"]
    outcome = ctrl["expected_outcome"]
    if outcome not in OUTCOMES:
        raise ConfigError(f"control.expected_outcome must be one of {OUTCOMES}")
    diag = raw["diagnostics"]
    try:
        control = StepControl(
            **{k: _num(raw, "control", k) for k in ctrl if k != "expected_outcome"},
            sample_every=_num(raw, "diagnostics", "sample_every"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    init = raw["initial"]
    if init["preset"] not in PRESETS:
        raise ConfigError(f"initial.preset must be one of {PRESETS}, got {init['preset']!r}")
    for key in ("amplitude", "u1_factor", "u2_factor", "width"):
        if _num(raw, "initial", key) < 0:
            raise ConfigError(f"initial.{key} must be nonnegative")
    if init["preset"] == "from_file" and not init["file"]:
        raise ConfigError("initial.file is required for the from_file preset")
    if init["center"] and len(init["center"]) != dim:
        raise ConfigError(f"initial.center must have {dim} entries")

    r_list = diag["r_list"]
    if not r_list or any(not isinstance(r, int) or r not in (2, 4, 8, 16, 32) for r in r_list):
        raise ConfigError("diagnostics.r_list must be a nonempty subset of {2, 4, 8, 16, 32}")
    unknown = [c for c in diag["checks"] if c not in ALL_CHECKS]
    if unknown:
        raise ConfigError(f"diagnostics.checks: unknown check(s) {unknown}; known: {list(ALL_CHECKS)}")
    if diag["s0"] != "auto":
        s0 = _num(raw, "diagnostics", "s0")
        if not 0 <= s0 < 1:
            raise ConfigError("diagnostics.s0 must be 'auto' or lie in [0, 1)")
    if _num(raw, "diagnostics", "tol_factor") <= 0:
        raise ConfigError("diagnostics.tol_factor must be positive")

    eig = raw["eigen"]
    if eig["robin_coefficient"] != "auto":
        _num(raw, "eigen", "robin_coefficient")
    if _num(raw, "eigen", "tol") <= 0:
        raise ConfigError("eigen.tol must be positive")
    if _num(raw, "eigen", "max_iter", integer=True) <= 0:
        raise ConfigError("eigen.max_iter must be positive")

    out = raw["output"]
    if any(f not in ("csv", "json") for f in out["formats"]):
        raise ConfigError("output.formats entries must be 'csv' or 'json'")
    if not isinstance(out["gnuplot"], bool):
        raise ConfigError("output.gnuplot must be true or false")

    return SimConfig(raw, grid, params, control, outcome, filled, warnings, base_dir or Path.cwd())


def parse_config(text: str, base_dir: Path | None = None) -> SimConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    return build_config(data, base_dir)


def load_config(path) -> SimConfig:
    """Read a TOML config, or the ``config`` echo stored in a run manifest."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            manifest = json.loads(text)
            data = manifest["config"]
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path} is not a run manifest: {exc}") from None
        cfg = build_config(data, path.parent)
        # every key is explicit in the echo; keep the original provenance
        cfg.defaults_filled = list(manifest.get("defaults_filled", cfg.defaults_filled))
        return cfg
    return parse_config(text, path.parent)


def set_path(data: dict, dotted: str, value) -> dict:
    """Copy of ``data`` with ``section.key`` set; the key must exist in the schema."""
    parts = dotted.split(".")
    if len(parts) != 2 or parts[0] not in DEFAULTS or parts[1] not in DEFAULTS[parts[0]]:
        raise ConfigError(f"unknown parameter path {dotted!r}")
    out = copy.deepcopy(data)
    out.setdefault(parts[0], {})[parts[1]] = value
    return out


# ---------------------------------------------------------------- runs


def eigen_coefficient(cfg: SimConfig) -> float:
    c = cfg.eigen["robin_coefficient"]
    return cfg.params.weight_coefficient if c == "auto" else float(c)


def weight_pair(cfg: SimConfig, grid: Grid | None = None) -> EigenPair:
    c = eigen_coefficient(cfg)
    if not c > 0:
        raise ConfigError("Robin coefficient must be positive for eigen mode")
    return first_eigenpair(assemble(grid or cfg.grid, c), tol=cfg.eigen["tol"], max_iter=cfg.eigen["max_iter"])


def initial_state(cfg: SimConfig, pair: EigenPair | None = None) -> SystemState:
    grid = cfg.grid
    init = cfg.initial
    amp = float(init["amplitude"])
    preset = init["preset"]
    if preset == "constant":
        shape = np.ones(grid.size)
    elif preset == "gaussian_bump":
        center = init["center"] or [0.5 * e for e in grid.extents]
        r2 = sum((x - c) ** 2 for x, c in zip(grid.mesh(), center))
        shape = np.exp(-r2 / (2.0 * float(init["width"]) ** 2))
    elif preset == "eigenfunction_multiple":
        pair = pair or weight_pair(cfg)
        shape = pair.phi1 / pair.phi1.max()
    else:
        return _state_from_file(cfg)
    return SystemState(0.0, amp * init["u1_factor"] * shape, amp * init["u2_factor"] * shape)


def _state_from_file(cfg: SimConfig) -> SystemState:
    path = Path(cfg.initial["file"])
    if not path.is_absolute():
        path = cfg.base_dir / path
    if path.suffix == ".npz":
        with np.load(path) as data:
            u1, u2 = np.asarray(data["u1"], float).ravel(), np.asarray(data["u2"], float).ravel()
    else:
        table = np.genfromtxt(path, delimiter=",", names=True)
        u1, u2 = np.asarray(table["u1"], float), np.asarray(table["u2"], float)
    if u1.size != cfg.grid.size or u2.size != cfg.grid.size:
        raise ConfigError(f"initial.file: expected {cfg.grid.size} nodal values, found {u1.size}/{u2.size}")
    scale = float(cfg.initial["amplitude"])
    return SystemState(0.0, scale * cfg.initial["u1_factor"] * u1, scale * cfg.initial["u2_factor"] * u2)


@dataclass
class RunResult:
    trajectory: Trajectory
    records: list
    reports: list
    settings: CheckSettings
    pair: EigenPair
    c_f: float
    manifest: dict

    @property
    def blew_up(self) -> bool:
        return self.trajectory.blew_up


def check_settings(cfg: SimConfig, pair: EigenPair, c_f: float) -> CheckSettings:
    diag = cfg.diagnostics
    p = cfg.params
    return CheckSettings(
        a=p.a, b=p.b, alpha=p.alpha, beta=p.beta,
        lambda1=pair.lambda1, min_phi1=pair.min_phi1, c_f=c_f,
        dt=cfg.control.dt_max, sample_every=cfg.control.sample_every,
        tol_factor=float(diag["tol_factor"]),
        s0=None if diag["s0"] == "auto" else float(diag["s0"]),
        r_list=tuple(diag["r_list"]),
        checks=tuple(diag["checks"]),
    )


def simulate(cfg: SimConfig) -> RunResult:
    """Eigen-solve, integrate, sample and check; no file output."""
    params, grid = cfg.params, cfg.grid
    pair = weight_pair(cfg)
    c_f = poincare_friedrichs_constant(grid, params.beta, tol=cfg.eigen["tol"], max_iter=cfg.eigen["max_iter"])
    ops = model_operators(grid, params)
    state0 = initial_state(cfg, pair)
    sampler = Sampler(pair, params, ops, cfg.diagnostics["r_list"])
    traj = run(state0, params, cfg.control, sampler=sampler, ops=ops)
    settings = check_settings(cfg, pair, c_f)
    reports = run_checks(traj.records, settings, traj.blew_up)
    manifest = _manifest(cfg, pair, c_f, settings, traj)
    return RunResult(traj, traj.records, reports, settings, pair, c_f, manifest)


def blowup_certificate(traj: Trajectory, reports) -> dict | None:
    if not traj.blew_up:
        return None
    last = traj.records[-1]
    premise = next((r.constants.get("premise_time") for r in reports if r.check == "w_bound"), None)
    return {
        "termination": traj.termination,
        "time": traj.final_state.t,
        "sup_u1": last.sup_u1,
        "sup_u2": last.sup_u2,
        "l2_u1": last.l2_u1,
        "l2_u2": last.l2_u2,
        "w": last.w,
        "premise_time": premise,
    }


def _manifest(cfg: SimConfig, pair: EigenPair, c_f: float, settings: CheckSettings, traj: Trajectory) -> dict:
    return {
        "config": cfg.raw,
        "defaults_filled": cfg.defaults_filled,
        "warnings": cfg.warnings,
        "versions": {
            "robinrd": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "grid": cfg.grid.describe(),
        "eigen": {**pair.describe(), "discrete_certificate": bool(pair.min_phi1 > 0)},
        "poincare_friedrichs": c_f,
        "main_regime": cfg.params.main_regime,
        "check_settings": settings.to_dict(),
        "termination": traj.termination,
        "blown_up": traj.blew_up,
        "steps": traj.steps,
        "rejected_steps": traj.rejected,
        "n_samples": len(traj.records),
        "final_time": traj.final_state.t,
    }


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x)}")


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, default=_json_default) + "\n"


def run_exit_status(result: RunResult, expected: str) -> int:
    """0: expected regime reproduced (and checks passed on global runs); 2: regime mismatch; 1: failed checks."""
    observed = "blowup" if result.blew_up else "global"
    if observed != expected:
        return 2
    if observed == "global" and any(r.passed is False for r in result.reports):
        return 1
    return 0


def cmd_run(cfg: SimConfig, out_dir=None) -> tuple[int, RunResult]:
    """Run one scenario and write ``trajectory.csv``, ``report.json``, ``manifest.json`` and plots."""
    result = simulate(cfg)
    out = Path(out_dir or cfg.output["directory"])
    out.mkdir(parents=True, exist_ok=True)
    formats = cfg.output["formats"]
    cert = blowup_certificate(result.trajectory, result.reports)
    result.manifest["blowup"] = cert
    if "csv" in formats:
        (out / "trajectory.csv").write_text(emit_records(result.records, cfg.diagnostics["r_list"]))
    if "json" in formats:
        (out / "report.json").write_text(report_json(result.reports))
    (out / "manifest.json").write_text(dump_json(result.manifest))
    if cfg.output["gnuplot"]:
        write_gnuplot(out, result)
    return run_exit_status(result, cfg.expected_outcome), result


def write_gnuplot(out: Path, result: RunResult) -> None:
    from .diagnostics import CORE_FIELDS

    def col(name):
        return CORE_FIELDS.index(name) + 1

    w_rep = next((r for r in result.reports if r.check == "w_bound"), None)
    c2 = w_rep.constants.get("C2") if w_rep else None
    head = "set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\n"
    (out / "w.gp").write_text(
        head
        + "set title 'weighted moment w(t)'\n"
        + (f"C2 = {c2!r}\n" if c2 is not None else "")
        + f"plot 'trajectory.csv' using 1:{col('w')} with lines title 'w'"
        + (", C2 with lines dashtype 2 title 'C2'\n" if c2 is not None else "\n")
        + "pause -1\n"
    )
    (out / "norms.gp").write_text(
        head
        + "set title 'norms'\nset logscale y\n"
        + "plot " + ", ".join(
            f"'trajectory.csv' using 1:{col(n)} with lines title '{n}'"
            for n in ("l2_u1", "l2_u2", "sup_u1", "sup_u2", "h1_u1", "h1_u2")
        )
        + "\npause -1\n"
    )
    if c2 is not None:
        c_f = result.c_f
        a = result.settings.a
        c7 = next((r.constants.get("C7", 0.0) for r in result.reports if r.check == "l2_decay"), 0.0) or 0.0
        l20 = result.records[0].l2_u2
        (out / "margins.gp").write_text(
            head
            + f"C2 = {c2!r}\nCF = {c_f!r}\nA = {a!r}\nC7 = {c7!r}\nL20 = {l20!r}\n"
            + "set title 'bound margins'\n"
            + f"plot 'trajectory.csv' using 1:(C2 - ${col('w')}) with lines title 'C2 - w', \\\n"
            + f"     '' using 1:(exp(-2*CF*$1)*L20**2 + 2*A*C7/(1-exp(-2*CF)) - ${col('l2_u2')}**2) "
            + "with lines title 'L2 bound - |u2|^2'\npause -1\n"
        )


# ---------------------------------------------------------------- eigen ladder


def cmd_eigen(cfg: SimConfig, levels: int = 3) -> tuple[int, dict]:
    """First eigenvalue on a ladder of grids with the spacing halved each time."""
    c = eigen_coefficient(cfg)
    if not c > 0:
        raise ConfigError("Robin coefficient must be positive for eigen mode")
    base = cfg.grid
    rows = []
    for k in range(levels):
        counts = [(n - 1) * 2**k + 1 for n in base.shape]
        grid = build_interval(counts[0], base.extents[0]) if base.dim == 1 else build_rectangle(*counts, *base.extents)
        pair = first_eigenpair(assemble(grid, c), tol=cfg.eigen["tol"], max_iter=cfg.eigen["max_iter"])
        rows.append({"counts": counts, **pair.describe()})
    lam = [r["lambda1"] for r in rows]
    summary: dict = {"robin_coefficient": c, "levels": rows}
    if levels >= 3 and lam[-2] != lam[-1]:
        summary["observed_order_richardson"] = math.log2(abs(lam[-3] - lam[-2]) / abs(lam[-2] - lam[-1]))
    # separable oracle: the rectangle eigenvalue is the sum of interval eigenvalues
    exact = sum(robin_eigenvalue_interval(c, length) for length in base.extents)
    errors = [abs(x - exact) for x in lam]
    summary["oracle_lambda1"] = exact
    summary["errors"] = errors
    if levels >= 2 and errors[-1] > 0:
        summary["observed_order_oracle"] = math.log2(errors[-2] / errors[-1])
    summary["min_phi1_all_positive"] = all(r["min_phi1"] > 0 for r in rows)
    return 0, summary


# ---------------------------------------------------------------- sweeps


def _sweep_one(args):
    data, base_dir, path, value = args
    try:
        cfg = build_config(set_path(data, path, value), base_dir)
        result = simulate(cfg)
    except Exception as exc:  # isolate per-run failures
        return {"value": value, "outcome": "error", "error": str(exc)}
    last = result.records[-1]
    w_rep = next((r for r in result.reports if r.check == "w_bound"), None)
    return {
        "value": value,
        "outcome": "blowup" if result.blew_up else "global",
        "termination": result.trajectory.termination,
        "blowup_time": result.trajectory.final_state.t if result.blew_up else None,
        "final_sup_u1": last.sup_u1,
        "final_sup_u2": last.sup_u2,
        "final_l2_u1": last.l2_u1,
        "final_l2_u2": last.l2_u2,
        "w_margin": w_rep.margin if w_rep else None,
        "premise_time": w_rep.constants.get("premise_time") if w_rep else None,
        "checks_passed": all(r.passed is not False for r in result.reports),
    }


SUMMARY_COLUMNS = ("value", "outcome", "termination", "blowup_time", "final_sup_u1", "final_sup_u2",
                   "final_l2_u1", "final_l2_u2", "w_margin", "premise_time", "checks_passed")


def worker_count(n_jobs: int) -> int:
    cap = os.environ.get("RD_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, n_jobs))


def cmd_sweep(data: dict, path: str, values, base_dir: Path | None = None) -> tuple[int, dict]:
    """Run every value of ``path``; rows come back in input order."""
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")
    build_config(set_path(data, path, values[0]), base_dir)  # fail fast on a broken base config
    jobs = [(data, base_dir, path, v) for v in values]
    workers = worker_count(len(jobs))
    if workers == 1:
        rows = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    summary = {"param": path, "rows": rows, **bracket(rows)}
    status = 1 if any(r["outcome"] == "error" for r in rows) else 0
    return status, summary


def bracket(rows) -> dict:
    """Empirical threshold bracket and the number of outcome changes along sorted values."""
    ok = sorted((r for r in rows if r["outcome"] != "error"), key=lambda r: r["value"])
    outcomes = [r["outcome"] for r in ok]
    transitions = sum(1 for x, y in zip(outcomes, outcomes[1:]) if x != y)
    glob = [r["value"] for r in ok if r["outcome"] == "global"]
    blow = [r["value"] for r in ok if r["outcome"] == "blowup"]
    return {
        "bracket": [max(glob) if glob else None, min(blow) if blow else math.inf],
        "transitions": transitions,
        "monotone": transitions <= 1 and (not glob or not blow or max(glob) < min(blow)),
    }


def summary_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for r in rows:
        out = []
        for k in SUMMARY_COLUMNS:
            v = r.get(k)
            out.append("" if v is None else repr(float(v)) if isinstance(v, float) else v)
        writer.writerow(out)
    return buf.getvalue()


# ---------------------------------------------------------------- verify


def cmd_verify(traj_text: str, manifest: dict, tol_factor: float | None = None) -> tuple[int, str]:
    """Recompute every trajectory-level check from stored samples."""
    records, r_list = read_records(traj_text)
    expected = manifest.get("n_samples")
    if expected is not None and len(records) != expected:
        raise SchemaError(f"row {len(records) + 2}: trajectory has {len(records)} samples, manifest lists {expected}")
    try:
        settings = CheckSettings.from_dict(manifest["check_settings"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"manifest lacks check settings: {exc}") from None
    if tuple(settings.r_list) != tuple(r_list):
        raise SchemaError("Lr columns in the trajectory do not match the manifest r_list")
    if tol_factor is not None:
        settings.tol_factor = tol_factor
    reports = run_checks(records, settings, bool(manifest.get("blown_up", False)))
    status = 0 if all(r.passed is not False for r in reports) else 1
    return status, report_json(reports)


__all__ = [
    "ConfigError", "DEFAULTS", "DiagnosticsRecord", "EigenError", "RunResult", "SimConfig",
    "build_config", "cmd_eigen", "cmd_run", "cmd_sweep", "cmd_verify", "initial_state",
    "load_config", "parse_config", "simulate",
]
