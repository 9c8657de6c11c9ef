"""Per-sample measurements along a trajectory and the bound checks built on them.

Every check works from the sampled records alone (no field data), so a
stored CSV plus the run manifest is enough to recompute the full report.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .mesh import integrate_boundary, integrate_volume
from .operator import RobinOperator, dirichlet_energy, gradient_energy
from .spectral import EigenPair
from .stepper import ModelParams, SystemState

CORE_FIELDS = (
    "t",
    "l1_u1", "l1_u2",
    "l2_u1", "l2_u2",
    "sup_u1", "sup_u2",
    "h1_u1", "h1_u2",
    "w", "m1", "y",
    "phi_energy", "phi1_func",
    "boundary_l2_u1", "boundary_l2_u2",
    "cross",
    # auxiliary quantities needed to re-run the checks from stored samples
    "w_prime", "weighted_sq_u2",
    "min_u1", "min_u2",
    "resolvent_sq_u1", "lap_sq_u2",
)

DEFAULT_R_LIST = (2, 4, 8, 16)


def moser_columns(r_list) -> tuple[str, ...]:
    cols = []
    for r in r_list:
        cols += [f"pow_u1_r{r}", f"h1pow_u1_r{r}", f"pow_u2_r{r}", f"h1pow_u2_r{r}"]
    return tuple(cols)


@dataclass
class DiagnosticsRecord:
    t: float
    l1_u1: float
    l1_u2: float
    l2_u1: float
    l2_u2: float
    sup_u1: float
    sup_u2: float
    h1_u1: float
    h1_u2: float
    w: float
    m1: float
    y: float
    phi_energy: float
    phi1_func: float
    boundary_l2_u1: float
    boundary_l2_u2: float
    cross: float
    w_prime: float
    weighted_sq_u2: float
    min_u1: float
    min_u2: float
    resolvent_sq_u1: float
    lap_sq_u2: float
    moser: dict = field(default_factory=dict)  # "pow_u1_r4" -> ||u1||_4^4, ...

    def row(self, r_list) -> list[float]:
        return [getattr(self, name) for name in CORE_FIELDS] + [self.moser[c] for c in moser_columns(r_list)]


def sample(
    state: SystemState,
    pair: EigenPair,
    params: ModelParams,
    ops: tuple[RobinOperator, RobinOperator],
    r_list=DEFAULT_R_LIST,
) -> DiagnosticsRecord:
    """Measure one state. ``w'`` comes from the equation, not from differencing."""
    op1, op2 = ops
    grid = op1.grid
    if not (grid.same_as(pair.grid) and grid.same_as(op2.grid)):
        raise ValueError("eigenpair, operators and state must share one grid")
    u1, u2, phi = state.u1, state.u2, pair.phi1
    wts = grid.volume_weights
    a, b, alpha, beta = params.a, params.b, params.alpha, params.beta

    g1, bd1 = dirichlet_energy(op1, u1)
    g2, bd2 = dirichlet_energy(op2, u2)
    sq1 = float(np.dot(wts, u1 * u1))
    sq2 = float(np.dot(wts, u2 * u2))
    w = integrate_volume(grid, u2 * phi)
    m1 = integrate_volume(grid, u1 * phi)
    au2 = op2 @ u2
    w_prime = integrate_volume(grid, (-au2 + a * u1) * phi)
    weighted_sq_u2 = integrate_volume(grid, u2 * u2 * phi)
    y = w_prime + (b + pair.lambda1) * w - 0.5 * weighted_sq_u2 - 0.5 * alpha * integrate_boundary(grid, u2 * phi)
    gam = params.gamma_bc
    phi_energy = 0.5 * (g1 + b * sq1 + g2) + integrate_boundary(
        grid, 0.5 * alpha * u1 * u1 + (beta / gam) * np.abs(u2) ** gam
    )
    resolvent = op1 @ u1 + b * u1

    moser = {}
    for r in r_list:
        for name, u in (("u1", u1), ("u2", u2)):
            v = np.abs(u) ** (0.5 * r)
            pw = float(np.dot(wts, v * v))
            moser[f"pow_{name}_r{r}"] = pw
            moser[f"h1pow_{name}_r{r}"] = gradient_energy(grid, v) + pw

    return DiagnosticsRecord(
        t=float(state.t),
        l1_u1=float(np.dot(wts, np.abs(u1))),
        l1_u2=float(np.dot(wts, np.abs(u2))),
        l2_u1=math.sqrt(sq1),
        l2_u2=math.sqrt(sq2),
        sup_u1=float(np.max(np.abs(u1))),
        sup_u2=float(np.max(np.abs(u2))),
        h1_u1=math.sqrt(g1 + b * sq1),
        h1_u2=math.sqrt(g2 + beta * bd2),
        w=w,
        m1=m1,
        y=y,
        phi_energy=phi_energy,
        phi1_func=0.5 * (g1 + alpha * bd1 + b * sq1),
        boundary_l2_u1=math.sqrt(bd1),
        boundary_l2_u2=math.sqrt(bd2),
        cross=integrate_volume(grid, u1 * u2),
        w_prime=w_prime,
        weighted_sq_u2=weighted_sq_u2,
        min_u1=float(np.min(u1)),
        min_u2=float(np.min(u2)),
        resolvent_sq_u1=float(np.dot(wts, resolvent * resolvent)),
        lap_sq_u2=float(np.dot(wts, au2 * au2)),
        moser=moser,
    )


class Sampler:
    """Callable adaptor handed to :func:`robinrd.stepper.run`."""

    def __init__(self, pair, params, ops, r_list=DEFAULT_R_LIST):
        self.pair, self.params, self.ops, self.r_list = pair, params, ops, tuple(r_list)

    def __call__(self, state: SystemState) -> DiagnosticsRecord:
        return sample(state, self.pair, self.params, self.ops, self.r_list)


# ---------------------------------------------------------------- checks


@dataclass
class BoundReport:
    check: str
    eq_tag: str
    constants: dict
    sup: float | None
    margin: float | None
    passed: bool | None  # None when the check was skipped
    tol: float
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "eq_tag": self.eq_tag,
            "constants": {k: _json_num(v) for k, v in self.constants.items()},
            "sup": _json_num(self.sup),
            "margin": _json_num(self.margin),
            "pass": self.passed,
            "tol": _json_num(self.tol),
        }
        if self.note:
            out["note"] = self.note
        return out


def _json_num(x):
    if x is None or isinstance(x, (str, bool)):
        return x
    x = float(x)
    return x if math.isfinite(x) else None


def _col(records, name) -> np.ndarray:
    return np.array([getattr(r, name) if name in CORE_FIELDS else r.moser[name] for r in records], dtype=float)


def default_s0_index(records, dt: float) -> int:
    """First sample with ``t >= min(0.1, 10 dt)``; 0 when no later sample exists."""
    t = _col(records, "t")
    target = min(0.1, 10.0 * dt)
    idx = np.nonzero(t >= target - 1e-12)[0]
    if idx.size == 0 or idx[0] >= len(records) - 1:
        return 0
    return int(idx[0])


def check_w_bound(records, b: float, lambda1: float, s0_index: int, tol: float, blown_up: bool = False) -> BoundReport:
    """Riccati bound on the weighted moment ``w`` after ``s0``.

    Also locates the first sample where ``w^2 / 4 > C1``, the premise that
    forces finite-time blow-up; for blown-up trajectories the bound itself
    is skipped and only that detector is reported.
    """
    if not records:
        return BoundReport("w_bound", "weighted-moment Riccati bound", {}, None, None, None, tol, "no samples")
    if not 0 <= s0_index < len(records):
        raise ValueError(f"s0_index {s0_index} outside 0..{len(records) - 1}")
    t = _col(records, "t")
    w = _col(records, "w")
    y = _col(records, "y")
    s0 = t[s0_index]
    c0 = abs(y[s0_index])
    c1 = c0 + (b + lambda1) ** 2
    c2 = 2.0 * math.sqrt(c1)
    after = slice(s0_index, None)
    with np.errstate(over="ignore", invalid="ignore"):
        premise = np.nonzero(0.25 * w[after] ** 2 > c1)[0]
    premise_time = float(t[s0_index + premise[0]]) if premise.size else None
    sup_after = float(np.max(w[after]))
    c2_bar = max(c2, float(np.max(w[: s0_index + 1])))
    y_floor = -c0 * math.exp(lambda1 * s0)
    y_margin = float(np.min(y[after])) - y_floor
    constants = {
        "s0": float(s0),
        "C0": c0,
        "C1": c1,
        "C2": c2,
        "C2_bar": c2_bar,
        "y_margin": y_margin,
        "premise_time": premise_time,
    }
    if blown_up:
        return BoundReport("w_bound", "weighted-moment Riccati bound", constants, sup_after, None, None, tol,
                           "trajectory blew up; bound skipped, premise detector reported")
    margin = c2 - sup_after
    passed = bool(margin >= -tol and y_margin >= -tol * max(1.0, c0))
    return BoundReport("w_bound", "weighted-moment Riccati bound", constants, sup_after, margin, passed, tol)


def check_l1_chain(records, min_phi1: float, tol: float = 1e-12) -> BoundReport:
    """``||u||_1 <= (int u phi1) / min phi1`` at every sample, for both fields."""
    if not min_phi1 > 0:
        raise ValueError("min_phi1 must be positive for the L1 chain")
    slack = []
    for l1_name, mom in (("l1_u1", "m1"), ("l1_u2", "w")):
        l1 = _col(records, l1_name)
        bound = _col(records, mom) / min_phi1
        slack.append((bound - l1) / np.maximum(np.maximum(l1, bound), 1e-300))
    margin = float(min(np.min(s) for s in slack)) if records else 0.0
    constants = {
        "min_phi1": min_phi1,
        "C4": float(np.max(_col(records, "m1"))) if records else 0.0,
        "C2_bar": float(np.max(_col(records, "w"))) if records else 0.0,
        "C5": float(np.max(_col(records, "l1_u1"))) if records else 0.0,
        "C6": float(np.max(_col(records, "l1_u2"))) if records else 0.0,
    }
    sup = max(constants["C5"], constants["C6"])
    return BoundReport("l1_chain", "weighted L1 to L1 via ground-state floor", constants, sup, margin,
                       bool(margin >= -tol), tol)


def unit_window_cross(records) -> tuple[float, bool]:
    """Sup over unit windows of the time-integrated cross term ``int u1 u2``.

    Returns ``(C7, full)``; ``full`` is False when the trajectory is shorter
    than one time unit and the whole available window was used instead.
    """
    t = _col(records, "t")
    cross = _col(records, "cross")
    if t.size < 2:
        return 0.0, False
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (cross[1:] + cross[:-1]) * np.diff(t))])
    starts = t[t + 1.0 <= t[-1] + 1e-12]
    if starts.size == 0:
        return float(cum[-1]), False
    ends = np.interp(starts + 1.0, t, cum)
    return float(np.max(ends - np.interp(starts, t, cum))), True


def check_l2_decay(records, a: float, c_f: float, tol: float, blown_up: bool = False) -> BoundReport:
    """Gronwall consequence ``||u2(t)||^2 <= e^{-2 C_F t}||u20||^2 + 2 a C7 / (1 - e^{-2 C_F})``.

    ``tol`` is relative to the bound.
    """
    tag = "L2 Gronwall bound for u2"
    c7, full = unit_window_cross(records)
    l2 = _col(records, "l2_u2")
    constants = {"C_F": c_f, "C7": c7, "C8": float(np.max(l2)) if records else 0.0, "full_window": full}
    note = "" if full else "trajectory shorter than one unit window; C7 over available window"
    if blown_up:
        return BoundReport("l2_decay", tag, constants, constants["C8"], None, None, tol,
                           "trajectory blew up; global-regime bound skipped")
    t = _col(records, "t")
    bound = np.exp(-2.0 * c_f * t) * l2[0] ** 2 + 2.0 * a * c7 / (1.0 - math.exp(-2.0 * c_f))
    rel = (bound - l2 ** 2) / np.maximum(bound, 1e-300)
    margin = float(np.min(rel))
    return BoundReport("l2_decay", tag, constants, constants["C8"], margin, bool(margin >= -tol), tol, note)


def check_h1_bounds(records, b: float, c_f: float, tol: float = 1e-10) -> BoundReport:
    """Coercivity inequalities evaluated at every sample (relative margins).

    ``2 b phi1(u1) <= ||A u1 + b u1||^2``, ``phi1(u1) >= (b/2)||u1||^2`` and
    ``C_F ||u2||_H^2 <= ||A u2||^2``; all are exact in the lumped inner product.
    """
    res = _col(records, "resolvent_sq_u1")
    f1 = _col(records, "phi1_func")
    l2 = _col(records, "l2_u1")
    h2 = _col(records, "h1_u2")
    lap = _col(records, "lap_sq_u2")
    tiny = 1e-300
    m_res = (res - 2 * b * f1) / np.maximum(res, tiny)
    m_phi = (f1 - 0.5 * b * l2 ** 2) / np.maximum(f1, tiny)
    m_lap = (lap - c_f * h2 ** 2) / np.maximum(lap, tiny)
    margin = float(min(m_res.min(), m_phi.min(), m_lap.min())) if records else 0.0
    constants = {
        "C12": float(h2.max()) if records else 0.0,
        "C14": float(_col(records, "h1_u1").max()) if records else 0.0,
        "margin_resolvent": float(m_res.min()) if records else 0.0,
        "margin_phi1": float(m_phi.min()) if records else 0.0,
        "margin_laplacian": float(m_lap.min()) if records else 0.0,
    }
    return BoundReport("h1_bounds", "H1 coercivity of phi1 and the Robin Laplacian", constants,
                       max(constants["C12"], constants["C14"]), margin, bool(margin >= -tol), tol)


def moser_quotients(records, r: int, which: str) -> float:
    """Max over consecutive sample pairs of the Lr differential inequality quotient.

    For u1: ``(d/dt ||u||_r^r + ||u^{r/2}||_H^2) / (r^2 (||u||_r^r + 1))``;
    for u2 the H1 term carries weight 2 and the power of r is 1. The time
    derivative is the secant over the pair and the other terms are taken at
    the later sample, the form the backward-Euler scheme satisfies between
    time levels. (A trapezoid average would charge the H1 energy of
    under-resolved initial data, which the implicit step dissipates at once,
    to the first interval.) Negative quotients are clipped to 0: the
    inequality then holds with any constant.
    """
    kappa, theta = (1.0, 2) if which == "u1" else (2.0, 1)
    t = _col(records, "t")
    p = _col(records, f"pow_{which}_r{r}")
    h = _col(records, f"h1pow_{which}_r{r}")
    dt = np.diff(t)
    with np.errstate(over="ignore", invalid="ignore"):
        lhs = np.diff(p) / dt + kappa * h[1:]
        q = lhs / (float(r) ** theta * (p[1:] + 1.0))
    if q.size == 0:
        return 0.0
    return max(0.0, float(np.max(q)))


def check_moser_hypothesis(records, r_list, sample_every: float, dt: float, tol: float = 1e-10,
                           blown_up: bool = False) -> BoundReport:
    """Measured constants of the Lr ladder and their stability in r.

    Passes when every quotient is finite and, per field, the largest
    measured constant is at most twice the one at the smallest r.
    """
    tag = "Lr ladder hypothesis for the L-infinity iteration"
    r_list = sorted(int(r) for r in r_list)
    if sample_every > 10.0 * dt:
        return BoundReport("moser", tag, {}, None, None, None, tol,
                           f"sampling too coarse: sample_every={sample_every} exceeds 10*dt={10 * dt}; "
                           "lower diagnostics.sample_every")
    if blown_up:
        return BoundReport("moser", tag, {}, None, None, None, tol, "trajectory blew up; global-regime bound skipped")
    constants = {}
    margin = math.inf
    finite = True
    for which, label in (("u1", "C16"), ("u2", "C18")):
        vals = [moser_quotients(records, r, which) for r in r_list]
        for r, v in zip(r_list, vals):
            constants[f"{label}_r{r}"] = v
        finite &= all(math.isfinite(v) for v in vals)
        ref = vals[0]
        constants[f"{label}_growth"] = max(vals) / ref if ref > 0 else (1.0 if max(vals) == 0 else math.inf)
        margin = min(margin, 2.0 * ref - max(vals))
    sup = max(v for k, v in constants.items() if "_r" in k) if constants else 0.0
    return BoundReport("moser", tag, constants, sup, margin, bool(finite and margin >= -tol), tol)


def check_nonnegativity(records, tol: float = 1e-12) -> BoundReport:
    m1, m2 = _col(records, "min_u1"), _col(records, "min_u2")
    margin = float(min(m1.min(), m2.min())) if records else 0.0
    return BoundReport("nonnegativity", "nonnegativity of both components", {"min_u1": float(m1.min()),
                       "min_u2": float(m2.min())}, None, margin, bool(margin >= -tol), tol)


def check_interpolation(records, tol: float = 1e-10) -> BoundReport:
    """``||u||_2 <= ||u||_1^{1/2} ||u||_inf^{1/2}`` for both fields (relative margin)."""
    worst = math.inf
    for k in ("u1", "u2"):
        l1, l2, sup = _col(records, f"l1_{k}"), _col(records, f"l2_{k}"), _col(records, f"sup_{k}")
        rel = (np.sqrt(l1 * sup) - l2) / np.maximum(l2, 1.0)
        if rel.size:
            worst = min(worst, float(rel.min()))
    margin = worst if math.isfinite(worst) else 0.0
    return BoundReport("interpolation", "L1-Linf interpolation of the L2 norm", {}, None, margin,
                       bool(margin >= -tol), tol)


ALL_CHECKS = ("w_bound", "l1_chain", "l2_decay", "h1_bounds", "moser", "nonnegativity", "interpolation")


@dataclass
class CheckSettings:
    """Everything the checks need besides the records; stored in the manifest."""

    a: float
    b: float
    alpha: float
    beta: float
    lambda1: float
    min_phi1: float
    c_f: float
    dt: float
    sample_every: float
    tol_factor: float = 10.0
    s0: float | None = None  # None: default policy
    r_list: tuple = DEFAULT_R_LIST
    checks: tuple = ALL_CHECKS

    @property
    def tol(self) -> float:
        return self.tol_factor * (self.dt + self.sample_every)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["r_list"] = list(self.r_list)
        d["checks"] = list(self.checks)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CheckSettings":
        known = {f.name for f in fields(cls)}
        d = {k: v for k, v in d.items() if k in known}
        d["r_list"] = tuple(d.get("r_list", DEFAULT_R_LIST))
        d["checks"] = tuple(d.get("checks", ALL_CHECKS))
        return cls(**d)


def s0_index_for(records, settings: CheckSettings) -> int:
    if settings.s0 is None:
        return default_s0_index(records, settings.dt)
    t = _col(records, "t")
    idx = np.nonzero(t >= settings.s0 - 1e-12)[0]
    return int(idx[0]) if idx.size else 0


def run_checks(records, settings: CheckSettings, blown_up: bool = False) -> list[BoundReport]:
    tol = settings.tol
    out = []
    for name in settings.checks:
        if name == "w_bound":
            out.append(check_w_bound(records, settings.b, settings.lambda1, s0_index_for(records, settings), tol,
                                     blown_up))
        elif name == "l1_chain":
            out.append(check_l1_chain(records, settings.min_phi1))
        elif name == "l2_decay":
            out.append(check_l2_decay(records, settings.a, settings.c_f, tol, blown_up))
        elif name == "h1_bounds":
            out.append(check_h1_bounds(records, settings.b, settings.c_f))
        elif name == "moser":
            out.append(check_moser_hypothesis(records, settings.r_list, settings.sample_every, settings.dt,
                                              blown_up=blown_up))
        elif name == "nonnegativity":
            out.append(check_nonnegativity(records))
        elif name == "interpolation":
            out.append(check_interpolation(records))
        else:
            raise ValueError(f"unknown check {name!r}; known: {', '.join(ALL_CHECKS)}")
    return out


def report_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------- CSV


class SchemaError(ValueError):
    pass


def emit_records(records, r_list=DEFAULT_R_LIST, stream=None) -> str:
    """Write one CSV row per sample using shortest round-trip float text.

    Returns the text; also writes it to ``stream`` when given.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CORE_FIELDS + moser_columns(r_list))
    for rec in records:
        writer.writerow([repr(float(v)) for v in rec.row(r_list)])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_records(text: str) -> tuple[list[DiagnosticsRecord], tuple[int, ...]]:
    """Parse CSV produced by :func:`emit_records`; returns records and the r list."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty trajectory file (missing header)") from None
    n_core = len(CORE_FIELDS)
    if tuple(header[:n_core]) != CORE_FIELDS:
        raise SchemaError("header does not match the diagnostics schema")
    extra = header[n_core:]
    if len(extra) % 4:
        raise SchemaError("malformed Lr columns in header")
    r_list = tuple(int(extra[i].rsplit("_r", 1)[1]) for i in range(0, len(extra), 4))
    if tuple(extra) != moser_columns(r_list):
        raise SchemaError("malformed Lr columns in header")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise SchemaError(f"row {lineno}: expected {len(header)} values, found {len(row)}")
        try:
            vals = [float(v) for v in row]
        except ValueError as exc:
            raise SchemaError(f"row {lineno}: {exc}") from None
        core = dict(zip(CORE_FIELDS, vals[:n_core]))
        records.append(DiagnosticsRecord(**core, moser=dict(zip(extra, vals[n_core:]))))
    return records, r_list
