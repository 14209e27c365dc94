"""Acceptance gate: one test per primary criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) and then
asserts. Thresholds are the stated ones; nothing is relaxed here.
"""

import json
import statistics
import time

import numpy as np
import pytest

import oracles
from conftest import record
from ipek.cli import main
from ipek.config import ScenarioConfig, dump_config
from ipek.dst import (
    FusionConfig,
    MassFunction,
    accentuate_risk,
    conflict,
    mass_from_local_report,
    pignistic,
    sequential_fuse,
    vacuous,
    yager_combine,
)
from ipek.baseline import blended_trust
from ipek.local_trust import apply_penalty, apply_reward, evaluate_report, penalty_factor, reward_factor
from ipek.metrics import ConfusionMatrix, f1, fpr, precision, recall
from ipek.sim import run

RATIOS = (0.15, 0.25, 0.35)
SEEDS = (0, 1, 2, 3, 4)
N_CASES = 10_000


def timed_run(cfg):
    t0 = time.perf_counter()
    tr = run(cfg)
    return tr, time.perf_counter() - t0


@pytest.fixture(scope="module")
def ipek_runs():
    return {(r, s): timed_run(ScenarioConfig(attacker_ratio=r, seed=s)) for r in RATIOS for s in SEEDS}


@pytest.fixture(scope="module")
def baseline_runs():
    cfg = ScenarioConfig(attacker_ratio=0.35, scheme="symmetric_baseline")
    return {s: run(cfg.replace(seed=s)) for s in SEEDS}


def by_ratio(runs, metric):
    return {r: [metric(runs[(r, s)][0].final) for s in SEEDS] for r in RATIOS}


def fmt(xs):
    return "[" + ", ".join("-" if x is None else f"{x:.3f}" for x in xs) + "]"


def test_dst_algebra_suite():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()

    def draw(n):
        t = rng.random(n)
        r = (1.0 - t) * rng.random(n)
        return [MassFunction(float(a), float(b), float(1.0 - a - b)) for a, b in zip(t, r)]

    a_s, b_s = draw(N_CASES), draw(N_CASES)
    knobs = rng.random((N_CASES, 3))
    bad = {"normality": 0, "vacuous": 0, "commutativity": 0, "conflict": 0, "accentuation": 0}
    v = vacuous()
    for a, b, (risk, tau, cap) in zip(a_s, b_s, knobs):
        ab, ba = yager_combine(a, b), yager_combine(b, a)
        bad["normality"] += abs(ab.total - 1.0) > 1e-9
        bad["vacuous"] += max(abs(x - y) for x, y in zip(yager_combine(a, v).as_tuple(), a.as_tuple())) > 1e-12
        bad["commutativity"] += max(abs(x - y) for x, y in zip(ab.as_tuple(), ba.as_tuple())) > 1e-12
        aT, aR, aU = a.as_tuple()
        bT, bR, bU = b.as_tuple()
        agree = aT * bT + aT * bU + aU * bT + aR * bR + aR * bU + aU * bR + aU * bU
        bad["conflict"] += abs(conflict(a, b) - (1.0 - agree)) > 1e-9
        out = accentuate_risk(a, float(risk), FusionConfig(float(tau), float(cap)))
        bad["accentuation"] += bool(
            abs(out.total - a.total) > 1e-9
            or out.risky < a.risky
            or out.trusted < a.trusted * (1 - cap) - 1e-12
            or (risk <= tau and out != a)
        )
    elapsed = time.perf_counter() - t0
    ok = not any(bad.values()) and elapsed < 5.0
    record("dst_algebra_suite", ok, f"{N_CASES} cases x 5 properties, failures={bad}, {elapsed:.2f}s")
    assert ok


def test_fixture_oracles():
    checks = []

    def eq(name, got, want):
        got, want = np.atleast_1d(got), np.atleast_1d(want)
        checks.append((name, bool(np.max(np.abs(got - want)) <= 1e-12)))

    eq("report_mass", mass_from_local_report(0.8, 0.75).as_tuple(), oracles.report_mass(0.8, 0.75))
    a, b = MassFunction(0.6, 0.2, 0.2), MassFunction(0.5, 0.3, 0.2)
    y, k = oracles.yager(a.as_tuple(), b.as_tuple())
    eq("yager", yager_combine(a, b).as_tuple(), y)
    eq("yager_value", y, (0.52, 0.16, 0.32))
    eq("conflict", conflict(a, b), k)
    eq("conflict_value", k, 0.28)
    eq("sequential_fuse", sequential_fuse([(0.8, a), (0.5, b)]).as_tuple(), y)
    for m in ((0.4, 0.3, 0.3), (0.65, 0.30, 0.05)):
        eq(f"accentuate{m}", accentuate_risk(MassFunction(*m), 0.5).as_tuple(), oracles.accentuate(m, 0.5))
    eq("accentuate_value_1", oracles.accentuate((0.4, 0.3, 0.3), 0.5), (0.4, 0.5, 0.1))
    eq("accentuate_value_2", oracles.accentuate((0.65, 0.30, 0.05), 0.5), (0.50, 0.50, 0.00))
    eq("pignistic", pignistic(MassFunction(*y)), oracles.betp(y))
    eq("pignistic_value", oracles.betp(y), 0.68)
    eq("penalty_factor", penalty_factor(0.9, 0.7), 1 - 0.1 * 0.3)
    eq("penalty", apply_penalty(0.9, 0.7), oracles.penalty(0.9, 0.7))
    eq("penalty_value", oracles.penalty(0.9, 0.7), 0.112)
    eq("penalty_max", apply_penalty(1.0, 1.0), oracles.penalty(1.0, 1.0))
    eq("reward_factor", reward_factor(0.6, 0.4), 0.6 * 0.6 + 0.4 * 0.4)
    eq("reward", apply_reward(0.5, 0.6, 0.4), oracles.reward(0.5, 0.6, 0.4))
    eq("reward_value", oracles.reward(0.5, 0.6, 0.4), 0.53822)
    eq("reward_high", apply_reward(0.9, 0.6, 0.4), oracles.reward(0.9, 0.6, 0.4))
    eq("reward_high_value", oracles.reward(0.9, 0.6, 0.4), 0.90702)
    eq("evaluate_dishonest", evaluate_report(0, 1, 0.95, 0.9, 0.7), 0.112)
    eq("baseline_blend", blended_trust(0.5, [(1.0, 0.8)]), oracles.blend(0.5, [(1.0, 0.8)]))
    eq("baseline_value", oracles.blend(0.5, [(1.0, 0.8)]), 0.65)
    eq("recall_59_75", recall(ConfusionMatrix(59, 0, 110, 16)), 59 / 75)
    failed = [n for n, ok in checks if not ok]
    ok = not failed
    record("fixture_oracles", ok, f"{len(checks)} checks at 1e-12, failed={failed}")
    assert ok


def test_zero_fpr(ipek_runs):
    fprs = by_ratio(ipek_runs, fpr)
    slowest = max(t for _, t in ipek_runs.values())
    parts, ok = [], slowest < 60.0
    for r in RATIOS:
        vals = fprs[r]
        mean, med = statistics.mean(vals), statistics.median(vals)
        ok &= mean <= 0.02 and med == 0.0
        parts.append(f"{r}: mean={mean:.3f} median={med:.3f}")
    record("zero_fpr", ok, "; ".join(parts) + f"; slowest run {slowest:.1f}s")
    assert ok


def test_recall_resilience(ipek_runs):
    recalls = by_ratio(ipek_runs, recall)
    r15, r35 = statistics.mean(recalls[0.15]), statistics.mean(recalls[0.35])
    drop = (r15 - r35) / r15 if r15 else float("inf")
    ok = r35 >= 0.60 and drop <= 0.15
    record("recall_resilience", ok, f"recall@0.15={r15:.3f} recall@0.35={r35:.3f} drop={drop:.1%}")
    assert ok


def test_f1_floor(ipek_runs, baseline_runs):
    f1s = by_ratio(ipek_runs, lambda cm: f1(cm) or 0.0)
    means = {r: statistics.mean(v) for r, v in f1s.items()}
    base = [f1(baseline_runs[s].final) or 0.0 for s in SEEDS]
    beats = [b < i for b, i in zip(base, f1s[0.35])]
    ok = min(means.values()) >= 0.75 and all(beats)
    record("f1_floor", ok, f"ipek mean f1 {fmt(means.values())}; @0.35 ipek {fmt(f1s[0.35])} baseline {fmt(base)}")
    assert ok


def test_precision_saturation(ipek_runs):
    offenders = []
    for (r, s), (tr, _) in ipek_runs.items():
        if not tr.revocation_log:
            continue
        worst = min(precision(cm) for _, cm in tr.snapshots if cm.tp + cm.fp > 0)
        if worst != 1.0:
            offenders.append(f"{r}/{s}:{worst:.2f}")
    ok = not offenders
    record("precision_saturation", ok, f"{len(offenders)}/{len(ipek_runs)} runs below 1.0 {offenders[:5]}")
    assert ok


def test_convergence(ipek_runs):
    parts, ok = [], True
    for r in RATIOS:
        hits = 0
        for s in SEEDS:
            tr = ipek_runs[(r, s)][0]
            mark = 0.3 * tr.config.sim_duration
            early = [cm for t, cm in tr.snapshots if t <= mark][-1]
            final = recall(tr.final)
            hits += final is not None and (recall(early) or 0.0) >= 0.5 * final
        ok &= hits >= 4
        parts.append(f"{r}: {hits}/5")
    record("convergence", ok, "seeds reaching half of final recall by 30% of run: " + ", ".join(parts))
    assert ok


def test_asymmetry():
    needed = oracles.rewards_to_recover(0.1, 0.5)
    lt, lib_steps = 0.1, 0
    while lt < 0.5:
        lt = apply_reward(lt, 1.0, 1.0)
        lib_steps += 1
    drops = all(abs(evaluate_report(0, 1, x, 1.0, 1.0) - 0.1) <= 1e-12 for x in np.linspace(0.0, 0.99, 100))
    ok = needed >= 6 and lib_steps == needed and drops
    record("asymmetry", ok, f"max-severity rewards from 0.1 to 0.5: {needed} (need >= 6); one false report -> 0.1: {drops}")
    assert ok


def test_determinism(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(dump_config(ScenarioConfig(attacker_ratio=0.35)))
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(cfg), "--out", str(a), "--seed", "4", "--radar"]) == 0
    assert main(["run", str(cfg), "--out", str(b), "--seed", "4", "--radar"]) == 0
    names = sorted(p.name for p in a.iterdir())
    same = all((a / n).read_bytes() == (b / n).read_bytes() for n in names)
    ok = same and len(names) == 5
    record("determinism", ok, f"{len(names)} files byte-identical: {same}")
    assert ok
