"""Default sweep for both schemes: ratios 15/25/35 %, five seeds.

    python scripts/run_sweep.py [--out results/sweep] [--jobs 1]
"""

import argparse
import sys
from pathlib import Path

from ipek.cli import main

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(ROOT / "results" / "sweep"))
    ap.add_argument("--jobs", default="1")
    args = ap.parse_args()
    sys.exit(main(["sweep", str(ROOT / "configs" / "sweep_default.json"),
                   "--out", args.out, "--jobs", args.jobs, "--radar"]))
