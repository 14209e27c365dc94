"""Discrete-time VANET simulation: vehicles, witnessing, messaging, authority.

Vehicles move, witness nearby events, broadcast event messages, score the
senders of messages about events they witness themselves, and forward those
local trust values to the central authority. Every ``gt_update_interval``
seconds the authority fuses the reports, updates global trust and extends
the revocation list.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ipek import baseline
from ipek.adversary import EVENT_AWARE, LOCATION_AWARE, AttackerProfile, decide_report, distort_feedback
from ipek.config import ScenarioConfig
from ipek.context import (
    AdmissionThresholds,
    Event,
    EventMessage,
    MessageStore,
    build_schedule,
    record_message,
    schedule_from_json,
    severity_midpoint,
    thresholds_for,
)
from ipek.dst import MassFunction, fuse_round, mass_from_local_report, pignistic, vacuous
from ipek.local_trust import LocalTrustRecord, evaluate_report
from ipek.metrics import ConfusionMatrix, classify
from ipek.mobility import RandomWaypoint

log = logging.getLogger(__name__)


@dataclass
class VehicleState:
    vehicle_id: int
    is_attacker: bool = False
    profile: Optional[AttackerProfile] = None
    entered_at: float = 0.0
    em_store: MessageStore = field(default_factory=MessageStore)
    lt_table: Dict[int, float] = field(default_factory=dict)
    # (sender, event) -> sent_at of the last message already scored
    scored: Dict[Tuple[int, int], float] = field(default_factory=dict)


@dataclass
class AuthorityState:
    scheme: str = "ipek"
    gt_table: Dict[int, MassFunction] = field(default_factory=dict)
    scalar_gt: Dict[int, float] = field(default_factory=dict)  # symmetric baseline only
    revoked: Set[int] = field(default_factory=set)
    pending: List[LocalTrustRecord] = field(default_factory=list)
    last_update: float = 0.0
    revocation_log: List[Tuple[float, int, float]] = field(default_factory=list)

    def register(self, vehicle_id: int) -> None:
        if self.scheme == "ipek":
            self.gt_table.setdefault(vehicle_id, vacuous())
        else:
            self.scalar_gt.setdefault(vehicle_id, baseline.NEUTRAL)

    def trust(self, vehicle_id: int) -> float:
        if self.scheme == "ipek":
            return pignistic(self.gt_table.get(vehicle_id, vacuous()))
        return self.scalar_gt.get(vehicle_id, baseline.NEUTRAL)

    def known(self) -> List[int]:
        table = self.gt_table if self.scheme == "ipek" else self.scalar_gt
        return sorted(table)


def usable_reports(authority: AuthorityState, now: float, timeout: float) -> List[LocalTrustRecord]:
    """Pending reports that may enter fusion.

    Drops reports from or about revoked vehicles and reports older than
    ``timeout``; keeps only the latest report per (reporter, target).
    """
    latest: Dict[Tuple[int, int], LocalTrustRecord] = {}
    for rec in authority.pending:
        if rec.reporter_id in authority.revoked or rec.target_id in authority.revoked:
            continue
        if rec.issued_at < now - timeout or rec.issued_at > now:
            continue
        key = (rec.reporter_id, rec.target_id)
        old = latest.get(key)
        if old is None or rec.issued_at >= old.issued_at:
            latest[key] = rec
    return [latest[k] for k in sorted(latest)]


def global_update(authority: AuthorityState, now: float, cfg: ScenarioConfig) -> List[int]:
    """One periodic authority round; returns the ids revoked in this round."""
    reports = usable_reports(authority, now, cfg.effective_report_timeout)
    authority.pending = []
    authority.last_update = now
    if authority.scheme != "ipek":
        newly = baseline.symmetric_baseline_update(
            authority.scalar_gt, reports, authority.revoked, cfg.revocation_threshold
        )
        for vid in newly:
            authority.revocation_log.append((now, vid, authority.scalar_gt[vid]))
        return newly

    weights = {vid: pignistic(m) for vid, m in authority.gt_table.items()}
    grouped: Dict[int, list] = defaultdict(list)
    for rec in reports:
        gt = weights.get(rec.reporter_id, 0.5)
        grouped[rec.target_id].append((gt, mass_from_local_report(gt, rec.lt), rec.reporter_id))
    for target in sorted(grouped):
        history = authority.gt_table.get(target, vacuous())
        authority.gt_table[target] = fuse_round(history, grouped[target], cfg.fusion)

    newly = []
    for vid in sorted(authority.gt_table):
        if vid in authority.revoked:
            continue
        gt = pignistic(authority.gt_table[vid])
        if gt < cfg.revocation_threshold:
            authority.revoked.add(vid)
            authority.revocation_log.append((now, vid, gt))
            newly.append(vid)
    return newly


@dataclass
class SimulationTrace:
    config: ScenarioConfig
    events: List[Event]
    attackers: Dict[int, str]
    entered_at: Dict[int, float]
    snapshots: List[Tuple[float, ConfusionMatrix]]
    revocation_log: List[Tuple[float, int, float]]
    final_gt: Dict[int, float]
    final_mass: Dict[int, Tuple[float, float, float]]
    stats: Dict[str, int]
    em_log: Optional[List[Tuple[float, int, int, int, int]]] = None  # (t, sender, event, status, truth)

    @property
    def final(self) -> ConfusionMatrix:
        return self.snapshots[-1][1]


def admitted_receivers(
    msg: EventMessage,
    positions: np.ndarray,
    present: np.ndarray,
    now: float,
    revoked,
    thresholds: AdmissionThresholds,
) -> np.ndarray:
    """Indices of vehicles that would admit ``msg``; vectorised admission checks."""
    if msg.sender_id in revoked or now - msg.sent_at > thresholds.t_th:
        return np.empty(0, dtype=int)
    d = np.hypot(positions[:, 0] - msg.x, positions[:, 1] - msg.y)
    ok = present & (d <= thresholds.d_th)
    ok[msg.sender_id] = False
    return np.nonzero(ok)[0]


class World:
    def __init__(self, cfg: ScenarioConfig, schedule: Optional[Sequence[Event]] = None, record_ems: bool = False):
        self.cfg = cfg
        seeds = np.random.SeedSequence(cfg.seed).spawn(4)
        sched_rng, role_rng, mob_rng, entry_rng = (np.random.default_rng(s) for s in seeds)

        if schedule is None and cfg.schedule_path:
            schedule = schedule_from_json(Path(cfg.schedule_path).read_text())
        if schedule is None:
            schedule = build_schedule(cfg.schedule_params(), sched_rng)
        self.events: List[Event] = list(schedule)
        self.thresholds = {
            k: thresholds_for(k, cfg.minute_scale, cfg.ignore_radius) for k in (1, 2, 3, 4)
        }

        n = cfg.n_vehicles
        attackers = role_rng.permutation(n)[: cfg.n_attackers]
        n_event_aware = int(round(cfg.event_aware_share * len(attackers)))
        kinds = {}
        for i, vid in enumerate(sorted(int(a) for a in attackers)):
            kinds[vid] = EVENT_AWARE if i < n_event_aware else LOCATION_AWARE
        entry = entry_rng.uniform(0, cfg.entry_window * cfg.sim_duration, size=n)
        start = entry_rng.uniform(0, cfg.grid_size, size=(n, 2))

        self.vehicles: List[VehicleState] = []
        for vid in range(n):
            profile = None
            if vid in kinds:
                theta = cfg.theta_event if kinds[vid] == EVENT_AWARE else cfg.theta_location
                profile = AttackerProfile(kinds[vid], theta, cfg.collusion_low, cfg.collusion_high)
            self.vehicles.append(VehicleState(vid, vid in kinds, profile, float(entry[vid])))
        self.entered_at = entry
        self.is_attacker = np.array([v.is_attacker for v in self.vehicles])
        self.mobility = RandomWaypoint(start, cfg.grid_size, cfg.speed_range, mob_rng)
        self.authority = AuthorityState(scheme=cfg.scheme)

        self.tick = 0
        self.now = 0.0
        self.present = np.zeros(n, dtype=bool)
        self._occ_ptr = [0] * len(self.events)
        self.current: Dict[int, int] = {}  # event id -> occurrence index
        self.witnessing: Set[Tuple[int, int]] = set()  # (vehicle, event)
        self._last_em: Dict[Tuple[int, int], Tuple[int, int, float]] = {}
        self.snapshots: List[Tuple[float, ConfusionMatrix]] = []
        self.stats: Dict[str, int] = defaultdict(int)
        self.em_log = [] if record_ems else None
        self._interval_ticks = max(1, int(round(cfg.gt_update_interval / cfg.dt)))
        self._n_ticks = int(round(cfg.sim_duration / cfg.dt))
        self.snapshot()

    @property
    def positions(self) -> np.ndarray:
        return self.mobility.pos

    # -- per-tick phases -------------------------------------------------

    def _admit_new_vehicles(self) -> None:
        newly = np.nonzero(~self.present & (self.entered_at <= self.now))[0]
        for vid in newly:
            self.present[vid] = True
            self.authority.register(int(vid))

    def _refresh_events(self) -> None:
        self.current = {}
        for ev in self.events:
            i = self._occ_ptr[ev.event_id]
            occs = ev.occurrences
            while i < len(occs) and occs[i].vanish <= self.now:
                i += 1
            self._occ_ptr[ev.event_id] = i
            if i < len(occs) and occs[i].appear <= self.now:
                self.current[ev.event_id] = i

    def _observe(self) -> None:
        """Recompute the (vehicle, event) witness set for current occurrences."""
        eids = sorted(self.current)
        if not eids:
            self.witnessing = set()
            return
        pts = np.array([self._occ(e).x for e in eids]), np.array([self._occ(e).y for e in eids])
        pos = self.positions
        dist = np.hypot(pos[:, 0:1] - pts[0][None, :], pos[:, 1:2] - pts[1][None, :])
        seen = (dist <= self.cfg.witness_radius) & self.present[:, None]
        vids, cols = np.nonzero(seen)
        self.witnessing = {(int(v), eids[c]) for v, c in zip(vids, cols)}

    def _occ(self, event_id: int):
        return self.events[event_id].occurrences[self.current[event_id]]

    def step(self) -> None:
        """Advance one tick of ``cfg.dt`` seconds."""
        self.tick += 1
        self.now = self.tick * self.cfg.dt
        self._admit_new_vehicles()
        self.mobility.advance(self.cfg.dt, self.present)
        self._refresh_events()
        before = self.witnessing
        self._observe()

        for vid, eid in sorted(self.witnessing - before):
            self.evaluate_and_report(vid, eid)

        for vid, eid in sorted(self.witnessing):
            for msg in self.witness_and_broadcast(vid, eid):
                self._deliver(msg)

        if self.tick % self._interval_ticks == 0:
            global_update(self.authority, self.now, self.cfg)
            self.snapshot()

    def witness_and_broadcast(self, vid: int, eid: int) -> List[EventMessage]:
        """Event messages ``vid`` emits about ``eid`` at this tick (0 or 1)."""
        if (vid, eid) not in self.witnessing:
            return []
        ev = self.events[eid]
        occ_idx = self.current[eid]
        truth = ev.state_at(self.now)
        v = self.vehicles[vid]
        status = decide_report(v.profile, ev, truth) if v.is_attacker else truth
        last = self._last_em.get((vid, eid))
        if last is not None and last[0] == occ_idx and last[1] == status:
            if self.now - last[2] < self.cfg.rebroadcast_period:
                return []
        self._last_em[(vid, eid)] = (occ_idx, status, self.now)
        occ = ev.occurrences[occ_idx]
        msg = EventMessage(vid, eid, ev.event_type, ev.location_type, occ.x, occ.y, status, self.now)
        self.stats["ems_sent"] += 1
        if self.em_log is not None:
            self.em_log.append((self.now, vid, eid, status, truth))
        return [msg]

    def _deliver(self, msg: EventMessage) -> None:
        if msg.sender_id in self.authority.revoked:
            self.stats["rejected_revoked"] += 1
            return
        th = self.thresholds[msg.event_type]
        receivers = admitted_receivers(msg, self.positions, self.present, self.now, self.authority.revoked, th)
        for rid in receivers.tolist():
            if record_message(self.vehicles[rid].em_store, msg):
                self.stats["ems_recorded"] += 1
                if (rid, msg.event_id) in self.witnessing:
                    self._score(rid, msg)

    def evaluate_and_report(self, vid: int, eid: int) -> List[LocalTrustRecord]:
        """Score every stored, not yet scored message about ``eid``."""
        if (vid, eid) not in self.witnessing:
            return []
        out = []
        for msg in self.vehicles[vid].em_store.about(eid):
            rec = self._score(vid, msg)
            if rec is not None:
                out.append(rec)
        return out

    def _score(self, vid: int, msg: EventMessage) -> Optional[LocalTrustRecord]:
        v = self.vehicles[vid]
        key = (msg.sender_id, msg.event_id)
        if v.scored.get(key, -1.0) >= msg.sent_at:
            return None
        ev = self.events[msg.event_id]
        occ = self._occ(msg.event_id)
        # only messages about the occurrence being witnessed, and still fresh
        if msg.sent_at < occ.appear:
            return None
        if self.now - msg.sent_at > self.thresholds[ev.event_type].t_th:
            return None
        if msg.sender_id in self.authority.revoked:
            return None
        v.scored[key] = msg.sent_at
        target = msg.sender_id
        if v.is_attacker:
            lt = distort_feedback(v.profile, self.vehicles[target].is_attacker)
        else:
            # severities come from the receiver's own type -> severity map, never the sender
            s_e, s_l = severity_midpoint(msg.event_type), severity_midpoint(msg.location_type)
            truth = ev.state_at(msg.sent_at)
            lt_old = v.lt_table.get(target, self.cfg.trust.t_neutral)
            lt = evaluate_report(msg.status, truth, lt_old, s_e, s_l, self.cfg.trust)
        v.lt_table[target] = lt
        rec = LocalTrustRecord(vid, target, lt, msg.event_id, self.now)
        self.authority.pending.append(rec)
        self.stats["reports"] += 1
        return rec

    def snapshot(self) -> ConfusionMatrix:
        cm = classify(self.vehicles, self.authority.revoked, self.now)
        self.snapshots.append((self.now, cm))
        return cm

    def run(self) -> SimulationTrace:
        while self.tick < self._n_ticks:
            self.step()
        return self.trace()

    def trace(self) -> SimulationTrace:
        auth = self.authority
        known = auth.known()
        return SimulationTrace(
            config=self.cfg,
            events=self.events,
            attackers={v.vehicle_id: v.profile.kind for v in self.vehicles if v.is_attacker},
            entered_at={v.vehicle_id: v.entered_at for v in self.vehicles},
            snapshots=list(self.snapshots),
            revocation_log=list(auth.revocation_log),
            final_gt={vid: auth.trust(vid) for vid in known},
            final_mass={vid: auth.gt_table[vid].as_tuple() for vid in known} if auth.scheme == "ipek" else {},
            stats=dict(sorted(self.stats.items())),
            em_log=self.em_log,
        )


def run(cfg: ScenarioConfig, schedule: Optional[Sequence[Event]] = None, record_ems: bool = False) -> SimulationTrace:
    return World(cfg, schedule, record_ems).run()
