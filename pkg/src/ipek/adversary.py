"""Context-aware on-off attackers.

An attacker tells the truth about events below its severity threshold and
lies (negates the observed status) at or above it. The event-aware kind
keys on event severity, the location-aware kind on location severity.
Attackers also collude when asked for feedback: honest targets get a low
local trust value, fellow attackers a high one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ipek.context import Event

EVENT_AWARE = "event_aware"
LOCATION_AWARE = "location_aware"
KINDS = (EVENT_AWARE, LOCATION_AWARE)

DEFAULT_THETA = {EVENT_AWARE: 0.6, LOCATION_AWARE: 0.4}


@dataclass(frozen=True)
class AttackerProfile:
    kind: str
    theta: Optional[float] = None
    collusion_low: float = 0.1
    collusion_high: float = 0.9

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown attacker kind {self.kind!r}")
        if self.theta is None:
            object.__setattr__(self, "theta", DEFAULT_THETA[self.kind])
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must be in [0, 1], got {self.theta!r}")
        if not 0.0 <= self.collusion_low < self.collusion_high <= 1.0:
            raise ValueError("need 0 <= collusion_low < collusion_high <= 1")

    def watched_severity(self, event: Event) -> float:
        return event.s_e if self.kind == EVENT_AWARE else event.s_l

    def is_malicious_for(self, event: Event) -> bool:
        return self.watched_severity(event) >= self.theta


def decide_report(profile: AttackerProfile, event: Event, true_state: int) -> int:
    """Status the attacker broadcasts for a witnessed event."""
    if profile.is_malicious_for(event):
        return 1 - true_state
    return true_state


def distort_feedback(profile: AttackerProfile, target_is_attacker: bool) -> float:
    return profile.collusion_high if target_is_attacker else profile.collusion_low
