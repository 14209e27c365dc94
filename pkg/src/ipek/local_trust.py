"""Vehicle-side asymmetric local trust.

A false report resets the sender's local trust below the neutral value by a
severity-scaled penalty; an honest report closes part of the remaining gap
to the maximum trust value. Losing trust is therefore one step, regaining it
is slow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TrustParams:
    base_penalty: float = 0.4  # lambda
    alpha: float = 0.6  # event-severity reward weight
    beta: float = 0.4  # location-severity reward weight
    mu: float = 0.15  # reward balance coefficient
    t_neutral: float = 0.5
    t_max: float = 0.99

    def __post_init__(self):
        if not 0.0 <= self.base_penalty <= 1.0:
            raise ValueError(f"base_penalty must be in [0, 1], got {self.base_penalty!r}")
        if self.alpha < 0 or self.beta < 0 or not math.isclose(self.alpha + self.beta, 1.0):
            raise ValueError(f"alpha + beta must be 1, got {self.alpha!r} + {self.beta!r}")
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"mu must be in (0, 1], got {self.mu!r}")
        if not 0.0 < self.t_neutral < self.t_max <= 1.0:
            raise ValueError("need 0 < t_neutral < t_max <= 1")
        if self.t_neutral - self.base_penalty < 0:
            raise ValueError("t_neutral - base_penalty must be non-negative")


@dataclass(frozen=True)
class LocalTrustRecord:
    reporter_id: int
    target_id: int
    lt: float
    event_id: int
    issued_at: float

    def __post_init__(self):
        if self.reporter_id == self.target_id:
            raise ValueError("a vehicle cannot report on itself")
        if not 0.0 <= self.lt <= 1.0:
            raise ValueError(f"lt must be in [0, 1], got {self.lt!r}")


def _check_severities(s_e: float, s_l: float) -> None:
    if not (0.0 <= s_e <= 1.0 and 0.0 <= s_l <= 1.0):
        raise ValueError(f"severities must be in [0, 1], got ({s_e!r}, {s_l!r})")


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def penalty_factor(s_e: float, s_l: float) -> float:
    """Probability that at least one of event/location is critical."""
    _check_severities(s_e, s_l)
    return 1.0 - (1.0 - s_e) * (1.0 - s_l)


def apply_penalty(s_e: float, s_l: float, params: TrustParams = TrustParams()) -> float:
    return _clamp(params.t_neutral - penalty_factor(s_e, s_l) * params.base_penalty)


def reward_factor(s_e: float, s_l: float, params: TrustParams = TrustParams()) -> float:
    _check_severities(s_e, s_l)
    return s_e * params.alpha + s_l * params.beta


def apply_reward(
    lt_old: float, s_e: float, s_l: float, params: TrustParams = TrustParams()
) -> float:
    """Close a fraction ``reward_factor * mu`` of the gap to ``t_max``."""
    if not 0.0 <= lt_old <= params.t_max:
        raise ValueError(f"lt_old must be in [0, t_max={params.t_max}], got {lt_old!r}")
    gain = (params.t_max - lt_old) * reward_factor(s_e, s_l, params) * params.mu
    return _clamp(lt_old + gain)


def evaluate_report(
    reported_state: int,
    true_state: int,
    lt_old: float,
    s_e: float,
    s_l: float,
    params: TrustParams = TrustParams(),
) -> float:
    # the penalty path ignores lt_old on purpose: past trust does not soften it
    if reported_state == true_state:
        return apply_reward(lt_old, s_e, s_l, params)
    return apply_penalty(s_e, s_l, params)
