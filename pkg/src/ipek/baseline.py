"""Symmetric averaging comparator.

Not a reimplementation of any published scheme: global trust is the
reporter-trust-weighted mean of incoming local trust values, blended 50/50
with the previous value. It exists to show what the evidential, asymmetric
fusion buys inside this codebase.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, Iterable, List, Tuple

BLEND = 0.5
NEUTRAL = 0.5


def blended_trust(prior: float, reports: Iterable[Tuple[float, float]]) -> float:
    """``reports`` are ``(reporter_gt, lt)`` pairs."""
    num = den = 0.0
    for gt, lt in reports:
        num += gt * lt
        den += gt
    if den == 0.0:
        return prior
    return BLEND * prior + (1.0 - BLEND) * (num / den)


def symmetric_baseline_update(
    gt: Dict[int, float],
    reports: Iterable,
    revoked: set,
    threshold: float,
) -> List[int]:
    """Apply one round of reports in place; returns newly revoked ids.

    ``reports`` yields objects with ``reporter_id``, ``target_id`` and ``lt``.
    Reporter weights are read before any target is updated.
    """
    weights = dict(gt)
    grouped: Dict[int, List[Tuple[float, float]]] = defaultdict(list)
    for rec in reports:
        grouped[rec.target_id].append((weights.get(rec.reporter_id, NEUTRAL), rec.lt))
    newly = []
    for target in sorted(grouped):
        gt[target] = blended_trust(gt.get(target, NEUTRAL), grouped[target])
        if target not in revoked and gt[target] < threshold:
            revoked.add(target)
            newly.append(target)
    return newly
