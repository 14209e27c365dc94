from types import SimpleNamespace

import pytest
from hypothesis import given, strategies as st

from ipek.metrics import ConfusionMatrix, classify, f1, fpr, mean_defined, metric_row, precision, radar, recall

counts = st.integers(0, 200)


def test_reference_confusion_example():
    cm = ConfusionMatrix(tp=59, fp=0, tn=110, fn=16)
    assert recall(cm) == pytest.approx(59 / 75, abs=1e-12)
    assert precision(cm) == 1.0
    assert fpr(cm) == 0.0


def test_symmetric_case():
    cm = ConfusionMatrix(1, 1, 1, 1)
    assert recall(cm) == precision(cm) == f1(cm) == fpr(cm) == 0.5


def test_undefined_sentinel():
    cm = ConfusionMatrix(tp=0, fp=0, tn=5, fn=0)
    assert recall(cm) is None and precision(cm) is None and f1(cm) is None
    assert fpr(cm) == 0.0
    assert radar(ConfusionMatrix())["one_minus_fpr"] is None
    assert f1(ConfusionMatrix(tp=0, fp=2, tn=1, fn=3)) == 0.0


def test_classify_present_only():
    vs = [
        SimpleNamespace(vehicle_id=0, is_attacker=True, entered_at=0.0),
        SimpleNamespace(vehicle_id=1, is_attacker=False, entered_at=0.0),
        SimpleNamespace(vehicle_id=2, is_attacker=True, entered_at=90.0),
        SimpleNamespace(vehicle_id=3, is_attacker=False, entered_at=10.0),
    ]
    assert classify(vs, set(), 0.0) == ConfusionMatrix(0, 0, 1, 1)
    assert classify(vs, {0}, 50.0) == ConfusionMatrix(1, 0, 2, 0)
    assert classify(vs, {0, 3}, 100.0) == ConfusionMatrix(1, 1, 1, 1)


def test_mean_defined():
    assert mean_defined([None, 1.0, 0.5]) == 0.75
    assert mean_defined([None]) is None


def test_negative_counts_rejected():
    with pytest.raises(ValueError):
        ConfusionMatrix(-1, 0, 0, 0)


@given(counts, counts, counts, counts)
def test_metric_bounds_and_f1_consistency(tp, fp, tn, fn):
    cm = ConfusionMatrix(tp, fp, tn, fn)
    row = metric_row(cm)
    for k in ("recall", "precision", "f1", "fpr"):
        assert row[k] is None or 0.0 <= row[k] <= 1.0
    p, r = row["precision"], row["recall"]
    if p is not None and r is not None and p + r > 0:
        assert row["f1"] == pytest.approx(2 * p * r / (p + r), abs=1e-12)


@given(counts, counts, counts)
def test_zero_fp_duality(tp, tn, fn):
    cm = ConfusionMatrix(tp, 0, tn, fn)
    assert fpr(cm) in (0.0, None)
    if tp > 0:
        assert precision(cm) == 1.0
