"""Structured grids on intervals and rectangles with trapezoidal quadrature.

Fields on a grid are plain flat ``numpy`` arrays indexed by the grid's flat
node index (C order over the per-axis node indices).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BoundaryRecord:
    """One (node, face) incidence. Corner nodes in 2D carry two records."""

    node: int
    axis: int
    sign: int  # -1 on the low face, +1 on the high face (outward normal)
    weight: float  # trapezoid weight of this node along this face


@dataclass(frozen=True, eq=False)
class Grid:
    extents: tuple[float, ...]
    counts: tuple[int, ...]
    spacing: tuple[float, ...] = field(init=False)
    coords: tuple[np.ndarray, ...] = field(init=False, repr=False)
    volume_weights: np.ndarray = field(init=False, repr=False)
    records: tuple[BoundaryRecord, ...] = field(init=False, repr=False)
    boundary_nodes: np.ndarray = field(init=False, repr=False)
    boundary_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.extents) != len(self.counts) or len(self.counts) not in (1, 2):
            raise ValueError("grid must be 1D or 2D with one extent per axis")
        for n, length in zip(self.counts, self.extents):
            if int(n) != n or n < 3:
                raise ValueError(f"node count must be an integer >= 3, got {n}")
            if not 0 < length < math.inf:
                raise ValueError(f"extent must be positive and finite, got {length}")
        spacing = tuple(length / (n - 1) for n, length in zip(self.counts, self.extents))
        coords = tuple(np.linspace(0.0, length, n) for n, length in zip(self.counts, self.extents))
        axis_w = [_trapezoid_weights(n, h) for n, h in zip(self.counts, spacing)]
        if self.dim == 1:
            vol = axis_w[0]
        else:
            vol = np.outer(axis_w[0], axis_w[1]).ravel()
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "volume_weights", vol)

        records = []
        shape = self.shape
        for axis in range(self.dim):
            for sign, idx in ((-1, 0), (1, shape[axis] - 1)):
                if self.dim == 1:
                    # counting measure on the two endpoints
                    records.append(BoundaryRecord(idx, axis, sign, 1.0))
                    continue
                other = 1 - axis
                face_w = axis_w[other]
                for j in range(shape[other]):
                    multi = (idx, j) if axis == 0 else (j, idx)
                    node = int(np.ravel_multi_index(multi, shape))
                    records.append(BoundaryRecord(node, axis, sign, float(face_w[j])))
        nodes = np.array(sorted({r.node for r in records}), dtype=np.intp)
        bw = np.zeros(self.size)
        for r in records:
            bw[r.node] += r.weight
        object.__setattr__(self, "records", tuple(records))
        object.__setattr__(self, "boundary_nodes", nodes)
        object.__setattr__(self, "boundary_weights", bw[nodes])

    @property
    def dim(self) -> int:
        return len(self.counts)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(n) for n in self.counts)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def measure(self) -> float:
        return float(np.prod(self.extents))

    @property
    def boundary_measure(self) -> float:
        if self.dim == 1:
            return 2.0
        return 2.0 * (self.extents[0] + self.extents[1])

    def flat_index(self, *multi: int) -> int:
        return int(np.ravel_multi_index(multi, self.shape))

    def is_boundary(self) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        mask[self.boundary_nodes] = True
        return mask

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Nodal coordinates as flat arrays, one per axis."""
        return tuple(c.ravel() for c in np.meshgrid(*self.coords, indexing="ij"))

    def evaluate(self, func) -> np.ndarray:
        """Sample ``func(*coords)`` at every node."""
        return np.asarray(np.broadcast_to(func(*self.mesh()), (self.size,)), dtype=float).copy()

    def same_as(self, other: "Grid") -> bool:
        return self is other or (self.counts == other.counts and self.extents == other.extents)

    def describe(self) -> dict:
        return {
            "dim": self.dim,
            "counts": list(self.shape),
            "extents": [float(x) for x in self.extents],
            "spacing": [float(h) for h in self.spacing],
        }


def _trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def build_interval(n: int, length: float) -> Grid:
    """Uniform grid on ``[0, length]`` with ``n`` nodes."""
    return Grid((float(length),), (n,))


def build_rectangle(nx: int, ny: int, lx: float, ly: float) -> Grid:
    """Tensor-product grid on ``[0, lx] x [0, ly]``."""
    return Grid((float(lx), float(ly)), (nx, ny))


def _check(grid: Grid, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.size,):
        raise ValueError(f"field of shape {f.shape} does not live on a grid with {grid.size} nodes")
    return f


def integrate_volume(grid: Grid, f: np.ndarray) -> float:
    return float(np.dot(grid.volume_weights, _check(grid, f)))


def integrate_boundary(grid: Grid, f: np.ndarray) -> float:
    """Boundary integral. In 1D this is ``f(0) + f(L)``."""
    f = _check(grid, f)
    return float(np.dot(grid.boundary_weights, f[grid.boundary_nodes]))


def inner(grid: Grid, u: np.ndarray, v: np.ndarray) -> float:
    """Weighted (mass-lumped) L2 inner product."""
    return float(np.dot(grid.volume_weights * _check(grid, u), _check(grid, v)))


def l2_norm(grid: Grid, u: np.ndarray) -> float:
    return float(np.sqrt(inner(grid, u, u)))
