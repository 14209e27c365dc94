"""Command line entry points.

    ipek run <config> [--out DIR] [--seed N] [--radar]
    ipek sweep <spec> [--out DIR] [--jobs N] [--radar]

The output directory falls back to $IPEK_OUT_DIR, then to ./results.
Exit codes: 0 success, 1 config error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from ipek.config import ConfigError, load_config
from ipek.metrics import radar
from ipek.output import fmt, write_trace
from ipek.sim import run
from ipek.sweep import CELL_COLUMNS, SUMMARY_COLUMNS, load_sweep_spec, radar_table, rows_csv, run_sweep, summarize

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
OUT_ENV = "IPEK_OUT_DIR"

log = logging.getLogger("ipek")


def out_dir(arg: Optional[str]) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(OUT_ENV) or "results")


def run_scenario(config_path, out: Path, seed: Optional[int] = None, with_radar: bool = False) -> int:
    cfg = load_config(config_path)
    if seed is not None:
        cfg = cfg.replace(seed=seed)
    trace = run(cfg)
    write_trace(trace, out, radar_file=with_radar)
    q = radar(trace.final)
    cm = trace.final
    print(f"scheme={cfg.scheme} ratio={cfg.attacker_ratio} seed={cfg.seed} "
          f"tp={cm.tp} fp={cm.fp} tn={cm.tn} fn={cm.fn}")
    print(f"recall={fmt(q['recall'])} precision={fmt(q['precision'])} "
          f"f1={fmt(q['f1'])} 1-fpr={fmt(q['one_minus_fpr'])}")
    return EXIT_OK


def sweep(spec_path, out: Path, jobs: int = 1, with_radar: bool = False) -> int:
    spec = load_sweep_spec(spec_path)
    rows = run_sweep(spec, jobs)
    summary = summarize(rows)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep_cells.csv").write_text(rows_csv(rows, CELL_COLUMNS))
    (out / "sweep_summary.csv").write_text(rows_csv(summary, SUMMARY_COLUMNS))
    if with_radar:
        (out / "radar.json").write_text(json.dumps(radar_table(summary), indent=1, sort_keys=True) + "\n")
    for r in summary:
        print(f"{r['scheme']:<18} ratio={r['attacker_ratio']:.2f} runs={r['runs']} "
              f"recall={fmt(r['recall'])} precision={fmt(r['precision'])} "
              f"f1={fmt(r['f1'])} fpr={fmt(r['fpr'])}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ipek", description="Run trust-management simulations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario")
    r.add_argument("config")
    r.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./results)")
    r.add_argument("--seed", type=int, help="override the config seed")
    r.add_argument("--radar", action="store_true", help="also write radar.json")

    s = sub.add_parser("sweep", help="run ratio x seed x scheme replications")
    s.add_argument("spec")
    s.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./results)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--radar", action="store_true", help="also write radar.json")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return run_scenario(args.config, out_dir(args.out), args.seed, args.radar)
        return sweep(args.spec, out_dir(args.out), max(1, args.jobs), args.radar)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: cannot read {exc.filename}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # anything past config parsing is a runtime failure
        log.debug("runtime failure", exc_info=True)
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
