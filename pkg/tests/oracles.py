"""Independent reference values used by the tests.

Nothing here calls into robinrd: the eigenvalue oracle is a plain
bisection on the separation-of-variables equation and the ODE oracle is
scipy's adaptive Runge-Kutta.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp


def bisect(f, lo: float, hi: float, tol: float = 1e-15, max_iter: int = 200) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise ValueError("root not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0 or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def robin_mu(c: float, length: float = 1.0) -> float:
    """Smallest positive root of tan(mu L) = 2 mu c / (mu^2 - c^2)."""

    def g(mu):
        return (mu * mu - c * c) * math.sin(mu * length) - 2.0 * mu * c * math.cos(mu * length)

    # g(0+) < 0 and g(pi/L) > 0
    return bisect(g, 1e-14, math.pi / length)


def robin_lambda(c: float, length: float = 1.0) -> float:
    return robin_mu(c, length) ** 2


def robin_phi(c: float, x: np.ndarray, length: float = 1.0) -> np.ndarray:
    mu = robin_mu(c, length)
    return np.cos(mu * x) + (c / mu) * np.sin(mu * x)


def ode_oracle(u10: float, u20: float, a: float, b: float, t_end: float) -> tuple[float, float]:
    """Spatially constant Neumann problem: u1' = u1 u2 - b u1, u2' = a u1."""
    sol = solve_ivp(
        lambda t, y: [y[0] * y[1] - b * y[0], a * y[0]],
        (0.0, t_end),
        [u10, u20],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    return float(sol.y[0, -1]), float(sol.y[1, -1])
