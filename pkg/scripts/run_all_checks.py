#!/usr/bin/env python3
"""Run the default verification battery and write ndjson reports.

Usage: python scripts/run_all_checks.py [--workers N] [--outdir reports]
Exit code is the worst exit code across subcommands.
"""

import argparse
import pathlib
import sys

from moduli_sep.cli import main as verify

BATTERY = [
    ["constants"],
    ["bad-list"],
    ["table1", "--k", "1"],
    ["table1", "--k", "2"],
    ["table1", "--k", "3"],
    ["separation", "--X", "400"],
    ["cderiv", "--X", "3000"],
    ["alpha-sets"],
    ["cross-pairs"],
    ["classify", "--dx", "-15", "--dy", "-20", "--alpha", "3/2", "--certify"],
]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--outdir", default="reports")
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for cmd in BATTERY:
        name = "_".join(c.lstrip("-") for c in cmd)
        out = outdir / f"{name}.ndjson"
        argv = ["--emit", "json", "--out", str(out)]
        if args.workers:
            argv += ["--workers", str(args.workers)]
        code = verify(argv + cmd)
        print(f"{' '.join(cmd):55s} -> exit {code}  ({out})")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
