#!/usr/bin/env python3
"""Generate every bundled scenario CSV (fig1 .. fig5_right) into out/figures.

The separation scans (fig5_*) integrate a few hundred trajectories each, so
the full set takes a minute or two.  Pass scenario names to build a subset:

    python scripts/run_figures.py fig1 fig4_right
"""
import sys
import time
from pathlib import Path

from kickedqubit.analysis import SCENARIO_NAMES
from kickedqubit.cli import main as cli_main

OUTDIR = Path(__file__).resolve().parents[1] / "out" / "figures"


def run(names):
    OUTDIR.mkdir(parents=True, exist_ok=True)
    for name in names:
        start = time.perf_counter()
        code = cli_main(["figure", name, "--outdir", str(OUTDIR)])
        if code != 0:
            return code
        print(f"{name}: wrote {OUTDIR / (name + '.csv')} ({time.perf_counter() - start:.1f} s)")
    return 0


if __name__ == "__main__":
    names = sys.argv[1:] or list(SCENARIO_NAMES)
    unknown = set(names) - set(SCENARIO_NAMES)
    if unknown:
        sys.exit(f"unknown scenario(s): {sorted(unknown)}; choose from {SCENARIO_NAMES}")
    raise SystemExit(run(names))
