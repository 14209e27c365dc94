"""Replication sweeps over attacker ratio x seed x scheme."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ipek.config import SCHEMES, ConfigError, ScenarioConfig, config_from_dict, load_config
from ipek.metrics import ConfusionMatrix, mean_defined, metric_row
from ipek.output import cell
from ipek.sim import run

CELL_COLUMNS = ("attacker_ratio", "scheme", "seed", "tp", "fp", "tn", "fn", "recall", "precision", "f1", "fpr")
SUMMARY_COLUMNS = ("attacker_ratio", "scheme", "runs", "recall", "precision", "f1", "fpr")


@dataclass(frozen=True)
class SweepSpec:
    base: ScenarioConfig = field(default_factory=ScenarioConfig)
    attacker_ratios: Tuple[float, ...] = (0.15, 0.25, 0.35)
    seeds: Tuple[int, ...] = (0, 1, 2, 3, 4)
    schemes: Tuple[str, ...] = ("ipek",)

    def __post_init__(self):
        if not self.attacker_ratios:
            raise ConfigError("attacker_ratios", "must not be empty")
        if not self.seeds:
            raise ConfigError("seeds", "must not be empty")
        if not self.schemes:
            raise ConfigError("schemes", "must not be empty")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError("schemes", f"unknown scheme {s!r}")
        for r in self.attacker_ratios:
            if not 0.0 <= r < 1.0:
                raise ConfigError("attacker_ratios", f"ratio {r!r} outside [0, 1)")

    def cells(self) -> List[ScenarioConfig]:
        return [
            self.base.replace(attacker_ratio=float(r), seed=int(s), scheme=sc)
            for r in self.attacker_ratios
            for sc in self.schemes
            for s in self.seeds
        ]


def load_sweep_spec(path) -> SweepSpec:
    """JSON object with ``base`` (inline config object or path) and the three lists."""
    path = Path(path)
    text = path.read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<json>", exc.msg, exc.lineno) from None
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "sweep spec must be a JSON object", 1)
    unknown = set(raw) - {"base", "attacker_ratios", "seeds", "schemes"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown field")
    base = raw.get("base", {})
    if isinstance(base, str):
        cfg = load_config(path.parent / base)
    else:
        cfg = config_from_dict(base, text)
    kwargs = {"base": cfg}
    for key in ("attacker_ratios", "seeds", "schemes"):
        if key in raw:
            if not isinstance(raw[key], list):
                raise ConfigError(key, "must be a list")
            kwargs[key] = tuple(raw[key])
    return SweepSpec(**kwargs)


def run_cell(cfg: ScenarioConfig) -> Dict:
    cm = run(cfg).final
    return {"attacker_ratio": cfg.attacker_ratio, "scheme": cfg.scheme, "seed": cfg.seed, **metric_row(cm)}


def run_sweep(spec: SweepSpec, jobs: int = 1) -> List[Dict]:
    """Per-cell rows in (ratio, scheme, seed) order, independent of ``jobs``."""
    cfgs = spec.cells()
    if jobs <= 1:
        return [run_cell(c) for c in cfgs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_cell, cfgs))


def summarize(rows: Sequence[Dict]) -> List[Dict]:
    """One row per (ratio, scheme); metrics are means over defined values."""
    groups: Dict[Tuple[float, str], List[Dict]] = {}
    for r in rows:
        groups.setdefault((r["attacker_ratio"], r["scheme"]), []).append(r)
    out = []
    for (ratio, scheme), rs in groups.items():
        out.append({
            "attacker_ratio": ratio,
            "scheme": scheme,
            "runs": len(rs),
            **{m: mean_defined(r[m] for r in rs) for m in ("recall", "precision", "f1", "fpr")},
        })
    return out


def rows_csv(rows: Sequence[Dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([cell(r[c]) for c in columns])
    return buf.getvalue()


def radar_table(summary: Sequence[Dict]) -> Dict[str, Dict[str, Dict[str, Optional[float]]]]:
    """scheme -> ratio -> (recall, precision, f1, 1 - fpr) of the means."""
    out: Dict[str, Dict[str, Dict[str, Optional[float]]]] = {}
    for r in summary:
        out.setdefault(r["scheme"], {})[repr(r["attacker_ratio"])] = {
            "recall": r["recall"],
            "precision": r["precision"],
            "f1": r["f1"],
            "one_minus_fpr": None if r["fpr"] is None else 1.0 - r["fpr"],
        }
    return out


def confusion(row: Dict) -> ConfusionMatrix:
    return ConfusionMatrix(row["tp"], row["fp"], row["tn"], row["fn"])
