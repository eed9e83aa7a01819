"""Write a few coherent-state profiles as CSV via the command-line tool."""

import argparse
from pathlib import Path

from ptcoh.cli import main as ptcoh

RUNS = {
    "gk_J1.csv": ["state", "gk", "--J", "1", "--gamma", "0"],
    "gk_J1_evolved.csv": ["state", "gk", "--J", "1", "--gamma", "1.4"],
    "minimal_r1.csv": ["state", "minimal", "--r", "1", "--theta", "0"],
    "ground.csv": ["wavefunction", "--n", "0"],
}

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", type=Path, nargs="?", default=Path("samples"))
    ap.add_argument("--samples", default="201")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for fname, argv in RUNS.items():
        code = ptcoh([*argv, "--samples", args.samples, "--out", str(args.outdir / fname)])
        print(f"{fname}: exit {code}")
