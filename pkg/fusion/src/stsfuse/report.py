"""Evaluation report: accuracy, per-class recall, confusion matrix, curve."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray, n_classes: int) -> np.ndarray:
    """Counts with rows = true class, columns = predicted class."""
    matrix = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(matrix, (y_true, y_pred), 1)
    return matrix


def per_class_recall(confusion: np.ndarray) -> np.ndarray:
    row_sums = confusion.sum(axis=1)
    safe = np.maximum(row_sums, 1)
    return np.where(row_sums > 0, np.diag(confusion) / safe, 0.0)


@dataclass
class EvalReport:
    classes: list[str]
    modality: str
    accuracy: float
    recall: list[float]
    confusion: list[list[int]]  # rows true, columns predicted
    curve: list[float] = field(default_factory=list)  # per-epoch val accuracy

    @classmethod
    def from_predictions(cls, classes, modality, y_true, y_pred, curve=()):
        y_true = np.asarray(y_true)
        y_pred = np.asarray(y_pred)
        conf = confusion_matrix(y_true, y_pred, len(classes))
        return cls(
            classes=list(classes),
            modality=modality,
            accuracy=float((y_true == y_pred).mean()),
            recall=[float(r) for r in per_class_recall(conf)],
            confusion=conf.tolist(),
            curve=[float(v) for v in curve],
        )

    def pair_accuracy(self, label_a: str, label_b: str) -> float:
        """Accuracy restricted to the samples of two classes."""
        conf = np.asarray(self.confusion)
        ia, ib = self.classes.index(label_a), self.classes.index(label_b)
        correct = conf[ia, ia] + conf[ib, ib]
        total = conf[ia].sum() + conf[ib].sum()
        return float(correct / total)

    def to_dict(self) -> dict:
        return {
            "classes": self.classes,
            "modality": self.modality,
            "accuracy": self.accuracy,
            "recall": self.recall,
            "confusion": self.confusion,
            "curve": self.curve,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalReport":
        return cls(**doc)

    def save(self, out_dir: str | Path, stem: str = "report") -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{stem}.json").write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        with open(out_dir / f"{stem}_confusion.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true\\pred"] + self.classes)
            for label, row in zip(self.classes, self.confusion):
                writer.writerow([label] + list(row))
