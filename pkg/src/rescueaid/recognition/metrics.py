"""Classifier evaluation: accuracy, per-group precision/recall, confusion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rescueaid.groups import NUM_GROUPS
from rescueaid.recognition.network import MlpModel, forward


@dataclass
class EvaluationReport:
    accuracy: float
    precision: list[float]  # by group ordinal; 0.0 where nothing was predicted
    recall: list[float]  # by group ordinal; 0.0 where the group has no support
    confusion: np.ndarray  # rows = true group, columns = predicted group
    support: list[int]

    def summary(self) -> str:
        lines = [f"accuracy {self.accuracy:.4f}"]
        for ordinal in range(NUM_GROUPS):
            lines.append(
                f"  group {ordinal}: precision {self.precision[ordinal]:.3f}"
                f" recall {self.recall[ordinal]:.3f} support {self.support[ordinal]}"
            )
        return "\n".join(lines)


def evaluate(model: MlpModel, x: np.ndarray, y: np.ndarray) -> EvaluationReport:
    """Score argmax predictions against labeled data."""
    y = np.asarray(y, dtype=np.int64)
    if len(y) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    predictions = np.argmax(forward(model, np.asarray(x, dtype=np.float64)), axis=1)

    classes = model.output_dim
    confusion = np.zeros((classes, classes), dtype=np.int64)
    for truth, predicted in zip(y, predictions):
        confusion[truth, predicted] += 1

    precision, recall = [], []
    for group in range(classes):
        predicted_count = confusion[:, group].sum()
        true_count = confusion[group, :].sum()
        hits = confusion[group, group]
        precision.append(float(hits / predicted_count) if predicted_count else 0.0)
        recall.append(float(hits / true_count) if true_count else 0.0)

    return EvaluationReport(
        accuracy=float((predictions == y).mean()),
        precision=precision,
        recall=recall,
        confusion=confusion,
        support=[int(s) for s in confusion.sum(axis=1)],
    )
