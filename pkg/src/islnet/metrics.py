"""Confusion matrix and the derived per-class / macro classification metrics.

Per-class values use the one-vs-rest view: for class c, TP is the diagonal
entry, FN its row remainder, FP its column remainder, TN everything else.
A class with an empty denominator gets value 0.0 plus an undefined flag,
and is excluded from the macro mean (its count is reported instead), so
aggregates stay honest without NaNs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


def confusion(true_labels, predicted_labels, k: int) -> np.ndarray:
    """k x k count matrix: rows are true classes, columns predictions."""
    t = np.asarray(true_labels, dtype=np.int64)
    p = np.asarray(predicted_labels, dtype=np.int64)
    if t.shape != p.shape:
        raise ParameterError(
            f"{t.size} true labels vs {p.size} predictions")
    if t.size and (t.min() < 0 or t.max() >= k or p.min() < 0 or p.max() >= k):
        raise ParameterError(f"labels must lie in [0, {k})")
    cm = np.zeros((k, k), dtype=np.int64)
    np.add.at(cm, (t, p), 1)
    return cm


def recall(tp: int, fn: int) -> tuple[float, bool]:
    """(value, undefined flag); TP/(TP+FN), or 0.0 flagged when the class is empty."""
    if tp < 0 or fn < 0:
        raise ParameterError("counts must be non-negative")
    if tp + fn == 0:
        return 0.0, True
    return tp / (tp + fn), False


def precision(tp: int, fp: int) -> tuple[float, bool]:
    """(value, undefined flag); TP/(TP+FP), or 0.0 flagged when never predicted."""
    if tp < 0 or fp < 0:
        raise ParameterError("counts must be non-negative")
    if tp + fp == 0:
        return 0.0, True
    return tp / (tp + fp), False


def accuracy(cm: np.ndarray) -> float:
    """Correct predictions over all predictions: trace / total."""
    total = int(cm.sum())
    if total == 0:
        raise ParameterError("confusion matrix is empty")
    return float(np.trace(cm)) / total


def f1(p: float, r: float) -> float:
    """Harmonic mean 2PR/(P+R); 0.0 by convention when both are 0."""
    if not (0.0 <= p <= 1.0 and 0.0 <= r <= 1.0):
        raise ParameterError(f"precision/recall must be in [0, 1], got {p}, {r}")
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


@dataclass
class MetricsReport:
    class_labels: list
    precision: list
    recall: list
    f1: list
    precision_undefined: list
    recall_undefined: list
    f1_undefined: list
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    support: list                       # true-sample count per class
    undefined_counts: dict              # metric name -> excluded class count
    total: int

    def to_dict(self) -> dict:
        return {
            "classes": [
                {
                    "label": self.class_labels[i],
                    "precision": self.precision[i],
                    "recall": self.recall[i],
                    "f1": self.f1[i],
                    "precision_undefined": self.precision_undefined[i],
                    "recall_undefined": self.recall_undefined[i],
                    "f1_undefined": self.f1_undefined[i],
                    "support": self.support[i],
                }
                for i in range(len(self.class_labels))
            ],
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
            },
            "accuracy": self.accuracy,
            "undefined_counts": dict(self.undefined_counts),
            "total": self.total,
        }


def macro_report(cm: np.ndarray, class_labels: list | None = None) -> MetricsReport:
    """Per-class one-vs-rest metrics plus their unweighted macro means."""
    k = cm.shape[0]
    if k < 2 or cm.shape != (k, k):
        raise ParameterError(f"need a square matrix with k >= 2, got {cm.shape}")
    labels = list(class_labels) if class_labels is not None else [str(i) for i in range(k)]
    if len(labels) != k:
        raise ParameterError(f"{len(labels)} labels for {k} classes")
    diag = np.diag(cm)
    rows = cm.sum(axis=1)
    cols = cm.sum(axis=0)
    ps, rs, fs = [], [], []
    pu, ru, fu = [], [], []
    for c in range(k):
        tp = int(diag[c])
        p, p_undef = precision(tp, int(cols[c]) - tp)
        r, r_undef = recall(tp, int(rows[c]) - tp)
        f_undef = p_undef or r_undef
        ps.append(p)
        rs.append(r)
        fs.append(0.0 if f_undef else f1(p, r))
        pu.append(p_undef)
        ru.append(r_undef)
        fu.append(f_undef)

    def macro(values, flags):
        defined = [v for v, bad in zip(values, flags) if not bad]
        return (sum(defined) / len(defined)) if defined else 0.0

    return MetricsReport(
        class_labels=labels,
        precision=ps, recall=rs, f1=fs,
        precision_undefined=pu, recall_undefined=ru, f1_undefined=fu,
        macro_precision=macro(ps, pu),
        macro_recall=macro(rs, ru),
        macro_f1=macro(fs, fu),
        accuracy=accuracy(cm),
        support=[int(x) for x in rows],
        undefined_counts={"precision": sum(pu), "recall": sum(ru), "f1": sum(fu)},
        total=int(cm.sum()),
    )
