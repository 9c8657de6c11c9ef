"""IMEX time stepping for the coupled flux/temperature system.

    d/dt u1 - Laplace u1 = u1 u2 - b u1,   du1/dn + alpha u1 = 0
    d/dt u2 - Laplace u2 = a u1,           du2/dn + beta |u2|^(g-2) u2 = 0

One step: the nodewise linear reaction of u1 is integrated exactly
(multiplication by ``exp(dt (u2 - b))``), followed by an implicit diffusion
solve; u2 takes an implicit diffusion solve with the explicit source
``a u1`` from the start of the step. Both resolvents are inverses of
M-matrices, so nonnegative data stay nonnegative.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .mesh import Grid
from .operator import RobinOperator, assemble, solve_spd

log = logging.getLogger(__name__)

TERMINATIONS = ("completed", "blowup", "dt_underflow")


@dataclass(frozen=True)
class ModelParams:
    a: float = 1.0
    b: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    gamma_bc: float = 2.0
    neumann_test: bool = False  # admits alpha = beta = 0 for ODE comparisons

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"params.a must be positive, got {self.a}")
        if not self.b > 0:
            raise ValueError(f"params.b must be positive, got {self.b}")
        if not self.alpha >= 0:
            raise ValueError(f"params.alpha must be nonnegative, got {self.alpha}")
        if not (self.beta > 0 or (self.neumann_test and self.beta == 0)):
            raise ValueError(f"params.beta must be positive, got {self.beta}")
        if not self.gamma_bc >= 2:
            raise ValueError(f"params.gamma_bc must be >= 2, got {self.gamma_bc}")

    @property
    def main_regime(self) -> bool:
        """Whether ``alpha <= 2 beta`` holds."""
        return self.alpha <= 2 * self.beta

    @property
    def weight_coefficient(self) -> float:
        """Robin coefficient of the weighting eigenfunction, ``(alpha + 2 beta) / 2``."""
        return 0.5 * (self.alpha + 2 * self.beta)


@dataclass(frozen=True)
class StepControl:
    dt_init: float = 1e-3
    dt_min: float = 1e-9
    dt_max: float = 1e-2
    safety: float = 0.9
    blowup_threshold: float = 1e8
    t_end: float = 10.0
    sample_every: float = 0.05

    def __post_init__(self):
        for name in ("dt_init", "dt_min", "dt_max", "blowup_threshold", "sample_every"):
            if not getattr(self, name) > 0:
                raise ValueError(f"control.{name} must be positive")
        if not self.t_end >= 0:
            raise ValueError("control.t_end must be nonnegative")
        if not 0 < self.safety <= 1:
            raise ValueError("control.safety must lie in (0, 1]")
        if not self.dt_min <= self.dt_init <= self.dt_max:
            raise ValueError("control requires dt_min <= dt_init <= dt_max")


@dataclass(frozen=True, eq=False)
class SystemState:
    t: float
    u1: np.ndarray
    u2: np.ndarray
    step_count: int = 0
    blown_up: bool = False

    @property
    def finite(self) -> bool:
        return bool(np.all(np.isfinite(self.u1)) and np.all(np.isfinite(self.u2)))


def model_operators(grid: Grid, params: ModelParams) -> tuple[RobinOperator, RobinOperator]:
    """Diffusion operators for u1 (coefficient alpha) and u2 (coefficient beta)."""
    return assemble(grid, params.alpha), assemble(grid, params.beta)


def gamma_bc_boundary_update(u2: np.ndarray, params: ModelParams, grid: Grid) -> RobinOperator:
    """u2 operator with the lagged coefficient ``beta |u2|^(gamma - 2)`` on the boundary."""
    if params.gamma_bc == 2:
        return assemble(grid, params.beta)
    coeff = np.zeros(grid.size)
    nodes = grid.boundary_nodes
    coeff[nodes] = params.beta * np.abs(u2[nodes]) ** (params.gamma_bc - 2)
    return assemble(grid, coeff)


def _implicit_solve(op: RobinOperator, rhs: np.ndarray, dt: float, tol: float) -> np.ndarray:
    # (I + dt A) x = rhs  <=>  (A + I/dt) x = rhs/dt
    return solve_spd(op.shifted(1.0 / dt), rhs / dt, tol=tol, x0=rhs)


def step(
    state: SystemState,
    params: ModelParams,
    dt: float,
    ops: tuple[RobinOperator, RobinOperator],
    tol: float = 1e-13,
) -> SystemState:
    """Advance one step of size ``dt``. Overflow in the reaction tags blow-up."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    op1, op2 = ops
    if params.gamma_bc != 2:
        op2 = gamma_bc_boundary_update(state.u2, params, op2.grid)
    with np.errstate(over="ignore", invalid="ignore"):
        reacted = state.u1 * np.exp(dt * (state.u2 - params.b))
        source = state.u2 + dt * params.a * state.u1
    if not (np.all(np.isfinite(reacted)) and np.all(np.isfinite(source))):
        return SystemState(state.t + dt, reacted, source, state.step_count + 1, blown_up=True)
    u1 = _implicit_solve(op1, reacted, dt, tol)
    u2 = _implicit_solve(op2, source, dt, tol)
    return SystemState(state.t + dt, u1, u2, state.step_count + 1)


@dataclass(eq=False)
class Trajectory:
    records: list = field(default_factory=list)
    termination: str = "completed"
    final_state: SystemState | None = None
    blowup_time: float | None = None
    steps: int = 0
    rejected: int = 0
    min_u1: float = np.inf
    min_u2: float = np.inf
    first_negative_time: float | None = None

    @property
    def blew_up(self) -> bool:
        return self.termination != "completed"


def run(
    initial: SystemState,
    params: ModelParams,
    ctrl: StepControl,
    sampler: Callable[[SystemState], object] | None = None,
    ops: tuple[RobinOperator, RobinOperator] | None = None,
    grid: Grid | None = None,
    allow_negative: bool = False,
    tol: float = 1e-13,
) -> Trajectory:
    """Integrate to ``ctrl.t_end`` or until blow-up.

    A step is rejected and ``dt`` halved while ``dt * max(u2 - b) > 0.5``;
    accepted full steps grow ``dt`` by ``1 / safety`` up to ``dt_max``.
    Steps are shortened to land exactly on sample times. ``sampler`` is
    called on the initial state, on every sample time and on the final
    (last finite) state.
    """
    if ops is None:
        if grid is None:
            raise ValueError("run needs either ops or grid")
        ops = model_operators(grid, params)
    if not allow_negative and (initial.u1.min() < 0 or initial.u2.min() < 0):
        raise ValueError("initial data must be nonnegative")
    sampler = sampler or (lambda s: s)
    traj = Trajectory()
    _track_min(traj, initial)

    state = initial
    traj.records.append(sampler(state))
    last_sampled = state.t
    k_sample = 1
    dt = ctrl.dt_init
    t_end = ctrl.t_end
    eps_t = 1e-12 * max(1.0, t_end)

    while state.t < t_end - eps_t:
        target = min(k_sample * ctrl.sample_every, t_end)
        h = min(dt, target - state.t)
        expo = h * float(np.max(state.u2 - params.b))
        if expo > 0.5:
            traj.rejected += 1
            dt = 0.5 * h
            if dt < ctrl.dt_min:
                traj.termination = "dt_underflow"
                traj.blowup_time = state.t
                break
            continue

        new = step(state, params, h, ops, tol=tol)
        traj.steps += 1
        if new.blown_up or not new.finite:
            traj.termination = "blowup"
            traj.blowup_time = state.t
            break
        landed = abs(new.t - target) <= eps_t
        if landed:
            new = replace(new, t=target)
        state = new
        _track_min(traj, state)
        if np.max(state.u1) > ctrl.blowup_threshold:
            traj.termination = "blowup"
            traj.blowup_time = state.t
            break
        if landed:
            traj.records.append(sampler(state))
            last_sampled = state.t
            k_sample += 1
        if h >= dt:
            dt = min(ctrl.dt_max, dt / ctrl.safety)

    if state.t != last_sampled:
        traj.records.append(sampler(state))
    if traj.blew_up:
        state = replace(state, blown_up=True)
        log.info("%s at t=%.6g after %d steps", traj.termination, state.t, traj.steps)
    traj.final_state = state
    return traj


def _track_min(traj: Trajectory, state: SystemState) -> None:
    m1, m2 = float(state.u1.min()), float(state.u2.min())
    traj.min_u1 = min(traj.min_u1, m1)
    traj.min_u2 = min(traj.min_u2, m2)
    if traj.first_negative_time is None and min(m1, m2) < -1e-12:
        traj.first_negative_time = state.t


@dataclass(frozen=True)
class AuditReport:
    minimum: float
    field: str
    first_violation_time: float | None
    passed: bool
    tol: float


def nonnegativity_audit(traj: Trajectory, tol: float = 1e-12) -> AuditReport:
    """Minimum over every accepted step and node of both fields."""
    field_name = "u1" if traj.min_u1 <= traj.min_u2 else "u2"
    minimum = min(traj.min_u1, traj.min_u2)
    return AuditReport(
        minimum=float(minimum),
        field=field_name,
        first_violation_time=traj.first_negative_time if minimum < -tol else None,
        passed=bool(minimum >= -tol),
        tol=tol,
    )
