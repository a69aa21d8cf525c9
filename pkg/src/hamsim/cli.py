"""Command-line entry point: ``hamsim run|validate <scenario.json>``.

Exit status is 0 on success, 2 when the scenario fails validation and 3 when
an optimizer did not converge (its reports are still written).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import HamsimError
from .scenarios import KINDS, TOL_PROFILES, RunContext, run_scenario, validate_scenario

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamsim", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("run", "validate"):
        sp = sub.add_parser(name)
        sp.add_argument("scenario", type=Path)
        sp.add_argument("--seed", type=int, default=None, help="overrides the seed in the file")
        if name == "run":
            sp.add_argument("--out", type=Path, default=None, help="output directory")
            sp.add_argument("--threads", type=int, default=None)
            sp.add_argument("--tol-profile", choices=sorted(TOL_PROFILES), default="default")
    return ap


def _load(path: Path):
    try:
        return json.loads(path.read_text()), []
    except OSError as exc:
        return None, [f"cannot read {path}: {exc.strerror}"]
    except json.JSONDecodeError as exc:
        return None, [f"invalid JSON: {exc}"]


def _threads(arg: int | None) -> int:
    if arg is not None:
        return max(1, arg)
    try:
        return max(1, int(os.environ.get("HAMSIM_THREADS", "1")))
    except ValueError:
        return 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    data, diags = _load(args.scenario)
    if not diags:
        diags = validate_scenario(data, args.seed)
    if args.command == "validate":
        for d in diags:
            print(d)
        return EXIT_INVALID if diags else EXIT_OK
    if diags:
        for d in diags:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_INVALID
    seed = args.seed if args.seed is not None else data.get("seed")
    out = args.out or Path(data.get("output_dir") or f"hamsim_out/{data['kind']}")
    ctx = RunContext(out, seed, _threads(args.threads), dict(TOL_PROFILES[args.tol_profile]))
    try:
        result = run_scenario(data, ctx)
    except HamsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"{data['kind']}: wrote {len(result.outputs) + 1} files to {out}")
    if not result.converged:
        print("warning: solver did not converge", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


__all__ = ["main", "KINDS"]
