"""One small-data run and the chain of a-priori bounds measured along it.

Each report states the constant it measured, the bound it compared against
and the margin (bound minus measurement). Margins are positive here; the
tolerance is 10 (dt + sample_every).
"""
from __future__ import annotations

from pathlib import Path

from robinrd.scenario import load_config, simulate

cfg = load_config(Path(__file__).parent / "configs" / "small_data.toml")
result = simulate(cfg)
traj = result.trajectory
print(f"termination: {traj.termination} at t={traj.final_state.t:g}, {traj.steps} steps, "
      f"{len(result.records)} samples")
print(f"lambda1={result.pair.lambda1:.6f}  min phi1={result.pair.min_phi1:.6f}  C_F={result.c_f:.6f}\n")

for rep in result.reports:
    print(f"{rep.check:14s} pass={rep.passed!s:5s} margin={rep.margin:.4g}  [{rep.eq_tag}]")
    for key, value in rep.constants.items():
        if isinstance(value, float):
            print(f"    {key:16s} {value:.6g}")

first, last = result.records[0], result.records[-1]
print(f"\nw: {first.w:.4f} -> {last.w:.4e}    sup u1: {first.sup_u1:.4f} -> {last.sup_u1:.4e}")
