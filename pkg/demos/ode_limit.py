"""Neumann test mode: constant data reduce the system to two ODEs.

With alpha = beta = 0 and spatially constant data the diffusion drops out
and the scheme integrates u1' = u1 u2 - b u1, u2' = a u1. Comparing with an
adaptive Runge-Kutta solution shows first-order convergence in dt.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from robinrd import ModelParams, StepControl, SystemState, build_interval, run

a, b, u0 = 1.0, 1.0, 0.5
ref = solve_ivp(lambda t, y: [y[0] * y[1] - b * y[0], a * y[0]], (0, 1), [u0, u0],
                method="DOP853", rtol=1e-12, atol=1e-14).y[:, -1]

params = ModelParams(a=a, b=b, alpha=0.0, beta=0.0, neumann_test=True)
grid = build_interval(5, 1.0)
prev = None
for dt in (8e-3, 4e-3, 2e-3, 1e-3, 5e-4):
    ctrl = StepControl(dt_init=dt, dt_min=dt / 10, dt_max=dt, t_end=1.0, sample_every=1.0)
    s = run(SystemState(0.0, np.full(5, u0), np.full(5, u0)), params, ctrl, grid=grid).final_state
    err = max(abs(s.u1[0] - ref[0]), abs(s.u2[0] - ref[1]))
    order = "" if prev is None else f"  order {math.log2(prev / err):.3f}"
    print(f"dt={dt:.0e}  u1(1)={s.u1[0]:.8f}  u2(1)={s.u2[0]:.8f}  error={err:.3e}{order}")
    prev = err
