"""Mean recall / FPR over time per attacker ratio, averaged over seeds.

Writes one CSV with columns time_s, ratio, recall, fpr (means over seeds
where the value is defined).

    python scripts/convergence.py [--seeds 5] [--out results/convergence.csv]
"""

import argparse
from pathlib import Path

from ipek.config import ScenarioConfig
from ipek.metrics import fpr, mean_defined, recall
from ipek.output import cell
from ipek.sim import run

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--ratios", type=float, nargs="+", default=[0.15, 0.25, 0.35])
    ap.add_argument("--out", default=str(ROOT / "results" / "convergence.csv"))
    args = ap.parse_args()

    lines = ["time_s,ratio,recall,fpr"]
    for ratio in args.ratios:
        traces = [run(ScenarioConfig(attacker_ratio=ratio, seed=s)) for s in range(args.seeds)]
        times = [t for t, _ in traces[0].snapshots]
        for i, t in enumerate(times):
            rec = mean_defined(recall(tr.snapshots[i][1]) for tr in traces)
            fp = mean_defined(fpr(tr.snapshots[i][1]) for tr in traces)
            lines.append(f"{cell(t)},{cell(ratio)},{cell(rec)},{cell(fp)}")
        print(f"ratio {ratio}: final recall={cell(rec)} fpr={cell(fp)}")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
