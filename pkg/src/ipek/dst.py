"""Two-hypothesis Dempster-Shafer algebra for global trust.

The frame of discernment is {T, R} (trusted, risky); every mass function
carries the three focal masses m(T), m(R) and m(T u R) = uncertainty.
Conflicting evidence is combined with Yager's rule, so conflict mass is
moved to uncertainty instead of being normalised away.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

NORMALITY_TOL = 1e-9
_RANGE_TOL = 1e-12


@dataclass(frozen=True)
class MassFunction:
    trusted: float
    risky: float
    uncertain: float

    def __post_init__(self):
        for name in ("trusted", "risky", "uncertain"):
            v = getattr(self, name)
            if not (-_RANGE_TOL <= v <= 1.0 + _RANGE_TOL):
                raise ValueError(f"mass component {name}={v!r} outside [0, 1]")
        total = self.trusted + self.risky + self.uncertain
        if abs(total - 1.0) > NORMALITY_TOL:
            raise ValueError(f"mass function not normalised (sum={total!r})")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.trusted, self.risky, self.uncertain)

    @property
    def total(self) -> float:
        return self.trusted + self.risky + self.uncertain


@dataclass(frozen=True)
class FusionConfig:
    """Risk-accentuation settings.

    ``trusted_drain_cap`` is the largest fraction of the trusted mass that
    one accentuation step may move to risky.
    """

    tau: float = 0.3
    trusted_drain_cap: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau!r}")
        if not 0.0 <= self.trusted_drain_cap <= 1.0:
            raise ValueError(
                f"trusted_drain_cap must be in [0, 1], got {self.trusted_drain_cap!r}"
            )


def vacuous() -> MassFunction:
    """Total ignorance: all mass on the uncertainty set."""
    return MassFunction(0.0, 0.0, 1.0)


def _check_unit(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {x!r}")


def mass_from_local_report(reporter_gt: float, lt: float) -> MassFunction:
    """Discount a local trust opinion by the reporter's own global trust.

    Whatever the reporter's trust does not vouch for becomes uncertainty,
    so low-trust reporters mostly contribute ignorance.
    """
    _check_unit("reporter_gt", reporter_gt)
    _check_unit("lt", lt)
    return MassFunction(reporter_gt * lt, reporter_gt * (1.0 - lt), 1.0 - reporter_gt)


def conflict(a: MassFunction, b: MassFunction) -> float:
    """Mass assigned to contradictory (T, R) pairings."""
    return a.trusted * b.risky + a.risky * b.trusted


def yager_combine(a: MassFunction, b: MassFunction) -> MassFunction:
    t = a.trusted * b.trusted + a.trusted * b.uncertain + a.uncertain * b.trusted
    r = a.risky * b.risky + a.risky * b.uncertain + a.uncertain * b.risky
    u = a.uncertain * b.uncertain + conflict(a, b)
    out = MassFunction(t, r, u)
    assert abs(out.total - 1.0) <= NORMALITY_TOL
    return out


Report = Union[Tuple[float, MassFunction], Tuple[float, MassFunction, int]]


def sequential_fuse(reports: Sequence[Report]) -> MassFunction:
    """Fold reports with Yager's rule, most trusted reporter first.

    Each report is ``(reporter_gt, mass)`` or ``(reporter_gt, mass, reporter_id)``.
    Equal trust values are ordered by ascending reporter id (or input
    position when no id is given) so the fold order is fully determined;
    this matters because Yager's rule is not associative.
    """
    if not reports:
        raise ValueError("sequential_fuse needs at least one report")

    def key(item):
        idx, rep = item
        rid = rep[2] if len(rep) > 2 else idx
        return (-rep[0], rid)

    ordered = [rep for _, rep in sorted(enumerate(reports), key=key)]
    fused = ordered[0][1]
    for rep in ordered[1:]:
        fused = yager_combine(fused, rep[1])
    return fused


def merge_with_history(old: MassFunction, current: MassFunction) -> MassFunction:
    return yager_combine(old, current)


def accentuate_risk(
    merged: MassFunction, current_risk: float, cfg: FusionConfig = FusionConfig()
) -> MassFunction:
    """Shift mass toward risky when the incoming risky mass exceeds ``cfg.tau``.

    The shortfall is drawn from uncertainty first, then from trusted mass,
    the latter capped at ``cfg.trusted_drain_cap`` of its current value.
    """
    _check_unit("current_risk", current_risk)
    if current_risk <= cfg.tau:
        return merged
    delta = current_risk - cfg.tau
    t, r, u = merged.as_tuple()
    from_u = min(u, delta)
    r += from_u
    u -= from_u
    if from_u < delta:
        from_t = min(t * cfg.trusted_drain_cap, delta - from_u)
        r += from_t
        t -= from_t
    out = MassFunction(t, r, u)
    assert abs(out.total - merged.total) <= NORMALITY_TOL
    return out


def pignistic(m: MassFunction) -> float:
    """Scalar trust: trusted mass plus half of the uncertainty."""
    return m.trusted + m.uncertain / 2.0


def fuse_round(
    history: MassFunction,
    reports: Iterable[Report],
    cfg: FusionConfig = FusionConfig(),
) -> MassFunction:
    """One authority update for a single target.

    Fuses the round's reports, merges the result into the stored history
    and applies risk accentuation driven by the round's fused risky mass.
    Returns ``history`` untouched when there are no reports.
    """
    reports = list(reports)
    if not reports:
        return history
    current = sequential_fuse(reports)
    merged = merge_with_history(history, current)
    return accentuate_risk(merged, min(1.0, max(0.0, current.risky)), cfg)
