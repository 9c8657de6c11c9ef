"""Ground state of the Robin Laplacian by inverse power iteration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .mesh import Grid, integrate_volume, l2_norm
from .operator import RobinOperator, SolverError, assemble, quadratic_form, solve_spd


class EigenError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class EigenPair:
    lambda1: float
    phi1: np.ndarray  # normalized so that its volume integral is 1
    residual: float  # ||A phi - lambda phi||_W / (lambda ||phi||_W)
    min_phi1: float
    iterations: int
    grid: Grid
    robin: float

    def describe(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "min_phi1": self.min_phi1,
            "residual": self.residual,
            "iterations": self.iterations,
            "robin_coefficient": self.robin,
        }


def first_eigenpair(
    op: RobinOperator,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    allow_neumann: bool = False,
) -> EigenPair:
    """Smallest eigenpair of ``op`` via inverse iteration from the constant vector.

    Convergence requires both the relative eigenvalue increment and the
    relative residual to drop below ``tol``; the residual target is floored
    at the round-off level of evaluating ``A phi`` on fine grids.
    ``allow_neumann`` admits the degenerate ``c = 0`` operator (solved with a
    unit shift), for tests.
    """
    grid = op.grid
    if op.shift != 0:
        raise ValueError("eigen mode expects an operator without zero-order shift")
    if np.ndim(op.robin) != 0:
        raise ValueError("eigen mode expects a scalar Robin coefficient")
    c = float(op.robin)
    if c <= 0 and not allow_neumann:
        raise ValueError("Robin coefficient must be positive for eigen mode")
    solve_op = op if c > 0 else op.shifted(1.0)
    inner_tol = min(1e-13, 1e-3 * tol)
    scale = op.norm_bound()

    x = np.ones(grid.size)
    x /= integrate_volume(grid, x)
    lam = quadratic_form(op, x) / l2_norm(grid, x) ** 2
    guess = x
    for it in range(1, max_iter + 1):
        try:
            y = solve_spd(solve_op, x, tol=inner_tol, x0=guess)
        except SolverError as exc:
            raise EigenError(f"inner solve failed at iteration {it}: {exc}") from exc
        y /= integrate_volume(grid, y)
        lam_new = quadratic_form(op, y) / l2_norm(grid, y) ** 2
        res = l2_norm(grid, op @ y - lam_new * y) / (max(lam_new, 1e-300) * l2_norm(grid, y))
        floor = 64 * np.finfo(float).eps * scale / max(lam_new, 1e-300)
        increment = abs(lam_new - lam) / max(abs(lam_new), 1.0)
        x, lam = y, lam_new
        # the next solve lands near x / lambda
        guess = x / (lam + solve_op.shift) if lam + solve_op.shift > 0 else x
        if increment <= tol and res <= max(tol, floor):
            break
    else:
        raise EigenError(f"inverse iteration did not converge in {max_iter} iterations")

    min_phi = float(x.min())
    if min_phi < -tol:
        raise EigenError(f"ground state has negative nodal value {min_phi:.3e}; discretization failure")
    return EigenPair(float(lam), x, float(res), min_phi, it, grid, c)


def poincare_friedrichs_constant(grid: Grid, beta: float, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Best discrete constant in ``C ||v||^2 <= ||grad v||^2 + beta ||v||^2_boundary``."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    return first_eigenpair(assemble(grid, beta), tol=tol, max_iter=max_iter).lambda1


@dataclass(frozen=True)
class PositivityReport:
    minimum: float
    node: int
    location: tuple[float, ...]
    on_boundary: bool
    passed: bool
    kind: str = "discrete certificate"


def certify_positivity(pair: EigenPair) -> PositivityReport:
    grid = pair.grid
    node = int(np.argmin(pair.phi1))
    loc = tuple(float(c[node]) for c in grid.mesh())
    return PositivityReport(
        minimum=float(pair.phi1[node]),
        node=node,
        location=loc,
        on_boundary=bool(grid.is_boundary()[node]),
        passed=bool(pair.phi1[node] > 0),
    )


def robin_eigenvalue_interval(c: float, length: float = 1.0) -> float:
    """Continuum first Robin eigenvalue on ``[0, length]`` (same ``c`` at both ends).

    Solves ``tan(mu L) = 2 mu c / (mu^2 - c^2)`` for the smallest positive
    root, written in a form without poles: ``(mu^2 - c^2) sin + ... = 0``.
    """
    if not c > 0:
        raise ValueError("c must be positive")

    def f(mu):
        return (mu * mu - c * c) * np.sin(mu * length) - 2.0 * mu * c * np.cos(mu * length)

    # the first root lies in (0, pi / L]
    lo, hi = 1e-12, np.pi / length
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps) ** 2
