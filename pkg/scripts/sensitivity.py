"""One-at-a-time sensitivity of the final metrics to ledger parameters.

Each row varies one knob away from the defaults and reports the
mean recall, FPR and F1 over seeds at one attacker ratio.

    python scripts/sensitivity.py [--ratio 0.25] [--seeds 3]
"""

import argparse
from pathlib import Path

from ipek.config import ScenarioConfig
from ipek.dst import FusionConfig
from ipek.metrics import f1, fpr, mean_defined, recall
from ipek.output import cell
from ipek.sim import run

ROOT = Path(__file__).resolve().parents[1]

KNOBS = {
    "revocation_threshold": [0.1, 0.15, 0.2, 0.3],
    "witness_radius": [150.0, 300.0, 600.0],
    "rebroadcast_period": [1.0, 5.0, 15.0],
    "collusion_low": [0.1, 0.3, 0.5],
    "tau": [0.3, 0.5, 1.0],
    "minute_scale": [0.5, 1.0, 2.0],
}


def variant(base: ScenarioConfig, knob: str, value: float) -> ScenarioConfig:
    if knob == "tau":
        return base.replace(fusion=FusionConfig(tau=value))
    return base.replace(**{knob: value})


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ratio", type=float, default=0.25)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--out", default=str(ROOT / "results" / "sensitivity.csv"))
    args = ap.parse_args()

    base = ScenarioConfig(attacker_ratio=args.ratio)
    lines = ["knob,value,recall,fpr,f1"]
    for knob, values in KNOBS.items():
        for value in values:
            finals = [run(variant(base, knob, value).replace(seed=s)).final for s in range(args.seeds)]
            row = [mean_defined(m(cm) for cm in finals) for m in (recall, fpr, f1)]
            lines.append(",".join([knob, cell(value)] + [cell(x) for x in row]))
            print(lines[-1], flush=True)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
