"""Confusion-matrix bookkeeping for revocation decisions.

Positive prediction means "revoked", positive truth means "is an attacker".
Ratios with a zero denominator are undefined and come back as ``None``;
they are written as empty CSV cells rather than 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def recall(cm: ConfusionMatrix) -> Optional[float]:
    return _ratio(cm.tp, cm.tp + cm.fn)


def precision(cm: ConfusionMatrix) -> Optional[float]:
    return _ratio(cm.tp, cm.tp + cm.fp)


def f1(cm: ConfusionMatrix) -> Optional[float]:
    p, r = precision(cm), recall(cm)
    if p is None or r is None:
        return None
    if p + r == 0:
        return 0.0  # tp == 0 with both classes seen: 2tp / (2tp + fp + fn) = 0
    return 2 * p * r / (p + r)


def fpr(cm: ConfusionMatrix) -> Optional[float]:
    return _ratio(cm.fp, cm.fp + cm.tn)


def metric_row(cm: ConfusionMatrix) -> dict:
    return {
        "tp": cm.tp,
        "fp": cm.fp,
        "tn": cm.tn,
        "fn": cm.fn,
        "recall": recall(cm),
        "precision": precision(cm),
        "f1": f1(cm),
        "fpr": fpr(cm),
    }


def radar(cm: ConfusionMatrix) -> dict:
    """(recall, precision, f1, 1 - fpr) summary."""
    rate = fpr(cm)
    return {
        "recall": recall(cm),
        "precision": precision(cm),
        "f1": f1(cm),
        "one_minus_fpr": None if rate is None else 1.0 - rate,
    }


def classify(vehicles: Iterable, revoked, now: float) -> ConfusionMatrix:
    """Confusion matrix over vehicles present at ``now``.

    ``vehicles`` yields objects with ``vehicle_id``, ``is_attacker`` and
    ``entered_at`` attributes.
    """
    tp = fp = tn = fn = 0
    for v in vehicles:
        if v.entered_at > now:
            continue
        flagged = v.vehicle_id in revoked
        if v.is_attacker:
            if flagged:
                tp += 1
            else:
                fn += 1
        elif flagged:
            fp += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, tn, fn)


def mean_defined(values: Iterable[Optional[float]]) -> Optional[float]:
    """Mean of the defined values; ``None`` if none are defined."""
    vals = [v for v in values if v is not None]
    return sum(vals) / len(vals) if vals else None
