#!/usr/bin/env python3
"""The slow sweeps behind --long-run: table row 4 and the extended j' floor.

Usage: python scripts/run_long_sweeps.py [--workers N] [--outdir reports]
Budget around an hour of CPU at the defaults.
"""

import argparse
import pathlib
import sys

from moduli_sep.cli import main as verify


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--outdir", default="reports")
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, cmd in [
        ("table1_k4", ["--long-run", "table1", "--k", "4"]),
        ("cderiv_long", ["--long-run", "cderiv", "--X", "3000"]),
    ]:
        argv = ["--emit", "json", "--out", str(outdir / f"{name}.ndjson")]
        if args.workers:
            argv += ["--workers", str(args.workers)]
        code = verify(argv + cmd)
        print(f"{name:20s} -> exit {code}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
