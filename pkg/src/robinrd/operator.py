"""Discrete negative Laplacian with the Robin condition du/dn + c u = 0.

The nodal matrix ``L`` is built from central differences, with the Robin
condition folded into the boundary rows by eliminating a ghost node
(``u_ghost = u_in - 2 h c u_bdry``). ``L`` is not symmetric as a matrix but
is self-adjoint in the lumped inner product ``<u, v>_W = sum(w u v)``, which
is what the conjugate-gradient solver and the energy identities rely on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .mesh import Grid, _check


class SolverError(RuntimeError):
    """Raised when conjugate gradients fail to reach the requested tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (relative residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class RobinOperator:
    grid: Grid
    robin: float | np.ndarray
    shift: float
    matrix: sparse.csr_matrix = field(repr=False)
    base: sparse.csr_matrix = field(repr=False)
    _shifts: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def nodal_robin(self) -> np.ndarray:
        """Robin coefficient per node (only boundary entries are meaningful)."""
        return np.broadcast_to(np.asarray(self.robin, dtype=float), (self.grid.size,))

    @property
    def positive_definite(self) -> bool:
        return self.shift > 0 or bool(np.any(self.nodal_robin[self.grid.boundary_nodes] > 0))

    def shifted(self, shift: float) -> "RobinOperator":
        """Same Robin part with a different zero-order term."""
        if shift < 0:
            raise ValueError("shift must be nonnegative")
        cached = self._shifts.get(shift)
        if cached is None:
            mat = (self.base + shift * sparse.identity(self.grid.size, format="csr")).tocsr()
            mat.sort_indices()
            cached = RobinOperator(self.grid, self.robin, float(shift), mat, self.base)
            if len(self._shifts) >= 16:
                self._shifts.pop(next(iter(self._shifts)))
            self._shifts[shift] = cached
        return cached

    def __matmul__(self, u):
        return self.matrix @ u

    def norm_bound(self) -> float:
        """Max absolute row sum, an upper bound on the spectral radius."""
        return float(abs(self.matrix).sum(axis=1).max())


def _axis_neumann(n: int, h: float) -> sparse.csr_matrix:
    main = np.full(n, 2.0)
    off = np.full(n - 1, -1.0)
    mat = sparse.diags([off, main, off], [-1, 0, 1], format="lil")
    mat[0, 1] = -2.0
    mat[n - 1, n - 2] = -2.0
    return (mat / (h * h)).tocsr()


def assemble(grid: Grid, c: float | np.ndarray = 0.0, shift: float = 0.0) -> RobinOperator:
    """Assemble ``-Laplace + shift`` with Robin coefficient ``c``.

    ``c`` may be a scalar or a per-node array (boundary entries are used);
    the per-node form serves the lagged nonlinear boundary condition.
    """
    c_arr = np.asarray(c, dtype=float)
    if c_arr.ndim == 0:
        if not c_arr >= 0:
            raise ValueError(f"Robin coefficient must be nonnegative, got {float(c_arr)}")
        robin: float | np.ndarray = float(c_arr)
    else:
        c_arr = _check(grid, c_arr)
        if np.any(c_arr[grid.boundary_nodes] < 0) or not np.all(np.isfinite(c_arr)):
            raise ValueError("Robin coefficient must be finite and nonnegative")
        robin = c_arr.copy()
    if not shift >= 0:
        raise ValueError(f"shift must be nonnegative, got {shift}")

    shape = grid.shape
    if grid.dim == 1:
        lap = _axis_neumann(shape[0], grid.spacing[0])
    else:
        ix = sparse.identity(shape[0], format="csr")
        iy = sparse.identity(shape[1], format="csr")
        lap = sparse.kron(_axis_neumann(shape[0], grid.spacing[0]), iy) + sparse.kron(
            ix, _axis_neumann(shape[1], grid.spacing[1])
        )
    nodal = np.broadcast_to(c_arr, (grid.size,))
    diag = np.zeros(grid.size)
    for rec in grid.records:
        # corners collect one contribution per incident face
        diag[rec.node] += 2.0 * nodal[rec.node] / grid.spacing[rec.axis]
    base = (lap + sparse.diags(diag)).tocsr()
    base.sort_indices()
    op = RobinOperator(grid, robin, 0.0, base, base)
    return op.shifted(float(shift)) if shift else op


def apply(op: RobinOperator, u: np.ndarray) -> np.ndarray:
    return op.matrix @ _check(op.grid, u)


def gradient_energy(grid: Grid, u: np.ndarray) -> float:
    """Discrete ``||grad u||_2^2`` from face differences."""
    u = _check(grid, u).reshape(grid.shape)
    total = 0.0
    for axis in range(grid.dim):
        h = grid.spacing[axis]
        diff = np.diff(u, axis=axis)
        if grid.dim == 1:
            total += float(np.sum(diff * diff)) / h
            continue
        other = 1 - axis
        n_o = grid.shape[other]
        w_o = np.full(n_o, grid.spacing[other])
        w_o[0] = w_o[-1] = 0.5 * grid.spacing[other]
        sq = diff * diff
        face = sq.sum(axis=0) if axis == 0 else sq.sum(axis=1)
        total += float(np.dot(face, w_o)) / h
    return total


def dirichlet_energy(op: RobinOperator, u: np.ndarray) -> tuple[float, float]:
    """Return ``(||grad u||^2, int_boundary u^2)`` separately."""
    grid = op.grid
    u = _check(grid, u)
    ub = u[grid.boundary_nodes]
    return gradient_energy(grid, u), float(np.dot(grid.boundary_weights, ub * ub))


def quadratic_form(op: RobinOperator, u: np.ndarray) -> float:
    """``<A u, u>_W``."""
    u = _check(op.grid, u)
    return float(np.dot(op.grid.volume_weights * (op.matrix @ u), u))


def solve_spd(
    op: RobinOperator,
    rhs: np.ndarray,
    tol: float = 1e-12,
    max_iter: int | None = None,
    x0: np.ndarray | None = None,
    jacobi: bool = False,
) -> np.ndarray:
    """Conjugate gradients in the weighted inner product.

    Stops when ``||rhs - A x||_W <= tol * ||rhs||_W`` (recursively updated
    residual). ``jacobi`` enables a diagonal preconditioner; off by default.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not op.positive_definite:
        raise ValueError("solve_spd needs a positive definite operator (c > 0 or shift > 0)")
    b = _check(op.grid, rhs)
    w = op.grid.volume_weights
    A = op.matrix
    n = b.size
    if max_iter is None:
        max_iter = max(10 * n, 1000)

    bnorm = np.sqrt(np.dot(w * b, b))
    if bnorm == 0.0:
        return np.zeros(n)
    if x0 is None:
        x = np.zeros(n)
        r = b.copy()
    else:
        x = np.array(x0, dtype=float)
        r = b - A @ x
    dinv = 1.0 / A.diagonal() if jacobi else None
    z = r * dinv if jacobi else r
    p = z.copy()
    rz = np.dot(w * r, z)
    rnorm = np.sqrt(np.dot(w * r, r))
    it = 0
    while rnorm > tol * bnorm:
        if it >= max_iter:
            raise SolverError("conjugate gradients did not converge", rnorm / bnorm, it)
        Ap = A @ p
        pAp = np.dot(w * p, Ap)
        if not pAp > 0:
            raise SolverError("operator is not positive definite along a search direction", rnorm / bnorm, it)
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        z = r * dinv if jacobi else r
        rz_new = np.dot(w * r, z)
        p = z + (rz_new / rz) * p
        rz = rz_new
        rnorm = np.sqrt(np.dot(w * r, r))
        it += 1
    return x
