"""Trace writers: metric time series CSV, JSON summary and the event schedule.

Everything is written with fixed column order, sorted keys and ``repr``
floats so two runs of the same (config, seed) give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Dict, Optional

from ipek.config import dump_config
from ipek.context import schedule_to_json
from ipek.metrics import metric_row, radar
from ipek.sim import SimulationTrace

TIMESERIES_COLUMNS = ("time_s", "tp", "fp", "tn", "fn", "recall", "precision", "f1", "fpr")


def cell(value) -> str:
    """CSV rendering; undefined metrics become empty cells."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def timeseries_csv(trace: SimulationTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TIMESERIES_COLUMNS)
    for t, cm in trace.snapshots:
        row = {"time_s": t, **metric_row(cm)}
        w.writerow([cell(row[c]) for c in TIMESERIES_COLUMNS])
    return buf.getvalue()


def summary_dict(trace: SimulationTrace) -> Dict:
    final = trace.final
    return {
        "scheme": trace.config.scheme,
        "seed": trace.config.seed,
        "attacker_ratio": trace.config.attacker_ratio,
        "final_time_s": trace.snapshots[-1][0],
        "confusion": {"tp": final.tp, "fp": final.fp, "tn": final.tn, "fn": final.fn},
        "metrics": radar(final),
        "attackers": {str(k): v for k, v in sorted(trace.attackers.items())},
        "global_trust": {str(k): v for k, v in sorted(trace.final_gt.items())},
        "global_mass": {str(k): list(v) for k, v in sorted(trace.final_mass.items())},
        "revocations": [
            {"time_s": t, "vehicle_id": vid, "gt": gt, "is_attacker": vid in trace.attackers}
            for t, vid, gt in trace.revocation_log
        ],
        "stats": dict(trace.stats),
    }


def summary_json(trace: SimulationTrace) -> str:
    return json.dumps(summary_dict(trace), indent=1, sort_keys=True) + "\n"


def write_trace(trace: SimulationTrace, out_dir, radar_file: bool = False) -> Dict[str, Path]:
    """Write all trace files into ``out_dir``; returns name -> path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "timeseries.csv": timeseries_csv(trace),
        "summary.json": summary_json(trace),
        "schedule.json": schedule_to_json(trace.events) + "\n",
        "config.json": dump_config(trace.config) + "\n",
    }
    if radar_file:
        files["radar.json"] = json.dumps({trace.config.scheme: radar(trace.final)}, indent=1, sort_keys=True) + "\n"
    paths = {}
    for name, text in files.items():
        p = out / name
        p.write_text(text)
        paths[name] = p
    return paths


def fmt(value: Optional[float]) -> str:
    return "undefined" if value is None else f"{value:.4f}"
