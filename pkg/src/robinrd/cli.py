"""``rd`` command line entry point.

Exit codes: 0 expected regime reproduced and checks passed, 1 error or
failed checks, 2 regime differs from ``control.expected_outcome``.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .diagnostics import SchemaError
from .scenario import (
    ConfigError,
    EigenError,
    cmd_eigen,
    cmd_run,
    cmd_sweep,
    cmd_verify,
    dump_json,
    load_config,
    summary_csv,
)
from .operator import SolverError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("robinrd")


def _parse_values(text: str) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            out.append(int(item) if item.lstrip("+-").isdigit() else float(item))
        except ValueError:
            out.append(item)
    return out


def _run(args) -> int:
    cfg = load_config(args.config)
    status, result = cmd_run(cfg, args.out)
    out = Path(args.out or cfg.output["directory"])
    traj = result.trajectory
    print(f"termination: {traj.termination} at t={traj.final_state.t:.6g} ({traj.steps} steps)")
    for rep in result.reports:
        flag = {True: "PASS", False: "FAIL", None: "SKIP"}[rep.passed]
        print(f"  {flag:4s} {rep.check:14s} margin={rep.margin!s:>24s}  {rep.note}")
    cert = result.manifest.get("blowup")
    if cert:
        print(f"blow-up certificate: t={cert['time']:.6g} sup_u1={cert['sup_u1']:.6g} "
              f"premise_time={cert['premise_time']}")
    print(f"outputs written to {out}")
    return status


def _eigen(args) -> int:
    cfg = load_config(args.config)
    status, summary = cmd_eigen(cfg, levels=args.levels)
    sys.stdout.write(dump_json(summary))
    return status


def _sweep(args) -> int:
    path = Path(args.config)
    data = tomllib.loads(path.read_text()) if path.suffix != ".json" else json.loads(path.read_text())["config"]
    values = _parse_values(args.values)
    status, summary = cmd_sweep(data, args.param, values, path.parent)
    out = Path(args.out or data.get("output", {}).get("directory", "rd_out"))
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.csv").write_text(summary_csv(summary["rows"]))
    lo, hi = summary["bracket"]
    # JSON has no infinity; keep the sentinel readable
    (out / "sweep.json").write_text(dump_json({**summary, "bracket": [lo, "+inf" if hi == math.inf else hi]}))
    for row in summary["rows"]:
        print(f"  {row['value']!s:>10s}  {row['outcome']}")
    print(f"bracket: [{lo}, {hi}]  transitions: {summary['transitions']}")
    return status


def _verify(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    status, text = cmd_verify(Path(args.traj).read_text(), manifest, args.tol_factor)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rd", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario and check every bound")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="output directory (overrides output.directory)")
    p.set_defaults(func=_run)

    p = sub.add_parser("eigen", help="first Robin eigenpair on a refinement ladder")
    p.add_argument("--config", required=True)
    p.add_argument("--levels", type=int, default=3)
    p.set_defaults(func=_eigen)

    p = sub.add_parser("sweep", help="run a parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--param", required=True, help="dotted path, e.g. initial.amplitude")
    p.add_argument("--values", required=True, help="comma separated values")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_sweep)

    p = sub.add_parser("verify", help="recompute checks from a stored trajectory")
    p.add_argument("--traj", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--tol-factor", type=float, default=None)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, SchemaError, EigenError, SolverError, OSError, tomllib.TOMLDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
