#!/usr/bin/env python3
"""Sweep the drive strength at fixed detuning and tabulate all intensities.

Reproduces the crossing structure of the elastic/inelastic ladder and
crossed components: the inelastic crossed term turns negative over a
window of Rabi frequencies with its minimum near Omega = delta.
"""

import argparse
import pathlib
import sys

from twoatom_cbs.cli import main as cli_main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--detuning", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=41)
    args = ap.parse_args()

    OUT.mkdir(exist_ok=True)
    out = OUT / f"sweep_delta{args.detuning:g}.csv"
    code = cli_main([
        "intensity-sweep",
        "--detuning", str(args.detuning),
        "--sweep-min", "1", "--sweep-max", "100",
        "--sweep-points", str(args.points),
        "--output", str(out),
    ])
    if code == 0:
        print(f"wrote {out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
