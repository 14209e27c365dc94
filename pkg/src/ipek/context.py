"""Traffic events, event messages and the message admission pipeline."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

# type -> (low, high) severity band; type 4 is pinned at 1.0
SEVERITY_BANDS: Dict[int, Tuple[float, float]] = {
    1: (0.1, 0.3),
    2: (0.4, 0.6),
    3: (0.7, 0.9),
    4: (1.0, 1.0),
}

# type -> (min, max) duration in minutes; type 4 is open-ended ("4+ hours"), capped here
DURATION_MINUTES: Dict[int, Tuple[float, float]] = {
    1: (5.0, 15.0),
    2: (15.0, 60.0),
    3: (60.0, 240.0),
    4: (240.0, 480.0),
}

DEFAULT_IGNORE_RADIUS: Dict[int, float] = {1: 500.0, 2: 1000.0, 3: 1500.0, 4: 2000.0}

LOW = (1, 2)
CRITICAL = (3, 4)


def severity_midpoint(kind: int) -> float:
    lo, hi = SEVERITY_BANDS[kind]
    return (lo + hi) / 2.0


def severity_for(kind: int, rng: np.random.Generator) -> float:
    """Draw a severity uniformly from the band of an event or location type."""
    if kind not in SEVERITY_BANDS:
        raise ValueError(f"unknown event/location type {kind!r}")
    lo, hi = SEVERITY_BANDS[kind]
    if lo == hi:
        return lo
    return float(rng.uniform(lo, hi))


@dataclass(frozen=True)
class Occurrence:
    """One appearance of an event: passive, then active, then passive again."""

    x: float
    y: float
    appear: float
    start: float
    end: float
    vanish: float

    def __post_init__(self):
        if not self.appear <= self.start <= self.end <= self.vanish:
            raise ValueError(f"occurrence phases out of order: {self}")


@dataclass
class Event:
    event_id: int
    event_type: int
    location_type: int
    s_e: float
    s_l: float
    occurrences: List[Occurrence] = field(default_factory=list)

    def __post_init__(self):
        for kind, s, name in (
            (self.event_type, self.s_e, "s_e"),
            (self.location_type, self.s_l, "s_l"),
        ):
            lo, hi = SEVERITY_BANDS[kind]
            if not lo - 1e-12 <= s <= hi + 1e-12:
                raise ValueError(f"{name}={s!r} outside band of type {kind}")
        for prev, nxt in zip(self.occurrences, self.occurrences[1:]):
            if nxt.appear < prev.vanish:
                raise ValueError(f"event {self.event_id}: overlapping occurrences")

    @property
    def activation(self) -> List[Tuple[float, float]]:
        return [(o.start, o.end) for o in self.occurrences]

    @property
    def duration_class(self) -> Tuple[float, float]:
        return DURATION_MINUTES[self.event_type]

    def occurrence_at(self, t: float) -> Optional[Occurrence]:
        for o in self.occurrences:
            if o.appear <= t < o.vanish:
                return o
        return None

    def state_at(self, t: float) -> int:
        """1 while inside an activation window, else 0."""
        for o in self.occurrences:
            if o.start <= t < o.end:
                return 1
        return 0


@dataclass(frozen=True)
class EventMessage:
    sender_id: int
    event_id: int
    event_type: int
    location_type: int
    x: float
    y: float
    status: int
    sent_at: float

    def __post_init__(self):
        if self.status not in (0, 1):
            raise ValueError(f"status must be 0 or 1, got {self.status!r}")
        if self.sent_at < 0:
            raise ValueError("sent_at must be non-negative")

    @property
    def position(self) -> Tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class AdmissionThresholds:
    d_th: float  # metres between receiver and reported event
    t_th: float  # seconds of message age

    def __post_init__(self):
        if self.d_th <= 0 or self.t_th <= 0:
            raise ValueError("admission thresholds must be positive")


def thresholds_for(
    event_type: int,
    minute_scale: float = 1.0,
    radii: Optional[Dict[int, float]] = None,
) -> AdmissionThresholds:
    """Staleness is twice the longest duration of the type, in sim-seconds."""
    radii = DEFAULT_IGNORE_RADIUS if radii is None else radii
    return AdmissionThresholds(
        d_th=float(radii[event_type]),
        t_th=2.0 * DURATION_MINUTES[event_type][1] * minute_scale,
    )


class Admission(enum.Enum):
    ADMIT = "admit"
    REVOKED = "revoked"
    TOO_FAR = "too_far"
    STALE = "stale"


def admit_message(
    msg: EventMessage,
    receiver_pos: Tuple[float, float],
    now: float,
    revoked,
    thresholds: AdmissionThresholds,
) -> Admission:
    # order is fixed so reject reasons are reproducible
    if msg.sender_id in revoked:
        return Admission.REVOKED
    if math.hypot(receiver_pos[0] - msg.x, receiver_pos[1] - msg.y) > thresholds.d_th:
        return Admission.TOO_FAR
    if now - msg.sent_at > thresholds.t_th:
        return Admission.STALE
    return Admission.ADMIT


class MessageStore:
    """Recorded event messages of one vehicle, latest per (sender, event)."""

    def __init__(self):
        self._by_event: Dict[int, Dict[int, EventMessage]] = {}

    def get(self, sender_id: int, event_id: int) -> Optional[EventMessage]:
        return self._by_event.get(event_id, {}).get(sender_id)

    def about(self, event_id: int) -> List[EventMessage]:
        """Messages about one event, ordered by sender id."""
        msgs = self._by_event.get(event_id, {})
        return [msgs[k] for k in sorted(msgs)]

    def __len__(self) -> int:
        return sum(len(m) for m in self._by_event.values())

    def __iter__(self):
        for eid in sorted(self._by_event):
            yield from self.about(eid)

    def __eq__(self, other):
        return isinstance(other, MessageStore) and self._by_event == other._by_event


def record_message(store: MessageStore, msg: EventMessage) -> bool:
    """Keep only the latest message per (sender, event).

    Equal timestamps keep the later arrival. Returns True if the store changed.
    """
    per_sender = store._by_event.setdefault(msg.event_id, {})
    old = per_sender.get(msg.sender_id)
    if old is not None:
        if old.sent_at > msg.sent_at or (old.sent_at == msg.sent_at and old == msg):
            return False
    per_sender[msg.sender_id] = msg
    return True


@dataclass(frozen=True)
class ScheduleParams:
    n_events: int = 40
    grid_size: float = 4000.0
    horizon: float = 2400.0
    minute_scale: float = 1.0  # sim-seconds per duration-class minute
    first_appear_stagger: float = 10.0
    passive_lead: Tuple[float, float] = (20.0, 60.0)
    passive_tail: Tuple[float, float] = (20.0, 60.0)
    reappear_gap: Tuple[float, float] = (30.0, 120.0)


def priority_band(event_id: int, n_events: int) -> int:
    """0 = low priority, 1 = one critical axis, 2 = both critical.

    Bands keep the 1/4, 1/2, 1/4 proportions of a 10/20/10 split of 40 events.
    """
    q1 = n_events // 4
    q3 = n_events - n_events // 4
    if event_id < q1:
        return 0
    if event_id < q3:
        return 1
    return 2


def _draw_types(band: int, rng: np.random.Generator) -> Tuple[int, int]:
    if band == 0:
        return int(rng.choice(LOW)), int(rng.choice(LOW))
    if band == 2:
        return int(rng.choice(CRITICAL)), int(rng.choice(CRITICAL))
    crit, low = int(rng.choice(CRITICAL)), int(rng.choice(LOW))
    if rng.random() < 0.5:
        return crit, low
    return low, crit


def build_schedule(params: ScheduleParams, rng: np.random.Generator) -> List[Event]:
    """Create the cyclic event schedule.

    Each event keeps its types and severities for the whole run and
    reappears at a fresh random position after every vanish.
    """
    events = []
    for eid in range(params.n_events):
        ev_type, loc_type = _draw_types(priority_band(eid, params.n_events), rng)
        s_e = severity_for(ev_type, rng)
        s_l = severity_for(loc_type, rng)
        lo, hi = DURATION_MINUTES[ev_type]
        occs = []
        t = eid * params.first_appear_stagger + rng.uniform(0, params.first_appear_stagger)
        while t < params.horizon:
            x, y = rng.uniform(0, params.grid_size, size=2)
            start = t + rng.uniform(*params.passive_lead)
            end = start + rng.uniform(lo, hi) * params.minute_scale
            vanish = end + rng.uniform(*params.passive_tail)
            occs.append(Occurrence(float(x), float(y), float(t), float(start), float(end), float(vanish)))
            t = vanish + rng.uniform(*params.reappear_gap)
        events.append(Event(eid, ev_type, loc_type, s_e, s_l, occs))
    return events


def schedule_to_json(events: Sequence[Event]) -> str:
    return json.dumps([asdict(e) for e in events], indent=1, sort_keys=True)


def schedule_from_json(text: str) -> List[Event]:
    out = []
    for raw in json.loads(text):
        occs = [Occurrence(**o) for o in raw.pop("occurrences")]
        out.append(Event(occurrences=occs, **raw))
    return out
