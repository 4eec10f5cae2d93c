"""Prequential (test-then-train) scoring.

Every sensor sample is predicted before the model learns from it. The
counter keeps per-class TP / FP / FN; F1 uses the positive class 1 when only
labels 0 and 1 occur and the macro average over classes otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

POSITIVE_LABEL = 1


def f1_score(tp: int, fp: int, fn: int) -> float:
    """2PR / (P + R), defined as 0 when there are no true positives."""
    if tp <= 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2.0 * precision * recall / (precision + recall)


def _format_counts(counts: dict[int, int], labels: tuple[int, ...]) -> str:
    return ";".join(f"{label}={counts.get(label, 0)}" for label in labels)


@dataclass(slots=True)
class PrequentialCounter:
    """Cumulative per-class confusion counts of a stream classifier."""

    tp: dict[int, int] = field(default_factory=dict)
    fp: dict[int, int] = field(default_factory=dict)
    fn: dict[int, int] = field(default_factory=dict)
    seen: set[int] = field(default_factory=set)
    total: int = 0

    def update(self, true_label: int, predicted_label: int) -> None:
        self.total += 1
        self.seen.update((true_label, predicted_label))
        if true_label == predicted_label:
            self.tp[true_label] = self.tp.get(true_label, 0) + 1
        else:
            self.fp[predicted_label] = self.fp.get(predicted_label, 0) + 1
            self.fn[true_label] = self.fn.get(true_label, 0) + 1

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(sorted(self.seen))

    @property
    def is_binary(self) -> bool:
        return self.seen <= {0, POSITIVE_LABEL}

    def class_f1(self, label: int) -> float:
        return f1_score(self.tp.get(label, 0), self.fp.get(label, 0), self.fn.get(label, 0))

    def macro_f1(self) -> float:
        """Mean per-class F1 over every label seen."""
        if not self.seen:
            return 0.0
        return math.fsum(self.class_f1(label) for label in self.labels) / len(self.seen)

    def f1(self) -> float:
        """Binary F1 of class 1, or macro F1 when more than two classes occur."""
        if self.is_binary:
            return self.class_f1(POSITIVE_LABEL)
        return self.macro_f1()

    def accuracy(self) -> float:
        return sum(self.tp.values()) / self.total if self.total else 0.0

    def formatted(self) -> tuple[str, str, str]:
        """TP, FP and FN as ``label=count`` lists joined by ``;``."""
        labels = self.labels
        return (
            _format_counts(self.tp, labels),
            _format_counts(self.fp, labels),
            _format_counts(self.fn, labels),
        )


def prequential_update(
    counter: PrequentialCounter, true_label: int, predicted_label: int
) -> PrequentialCounter:
    """Record one test-then-train outcome and return the counter."""
    counter.update(true_label, predicted_label)
    return counter


__all__ = ["POSITIVE_LABEL", "PrequentialCounter", "f1_score", "prequential_update"]
