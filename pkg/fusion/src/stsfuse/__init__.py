"""Dual-stream visuotactile classifier harness for stsim dataset manifests."""

from .data import ManifestDataset, ModalitySpec, load_index
from .model import ConvStream, FusionClassifier
from .report import EvalReport, confusion_matrix, per_class_recall
from .train import evaluate, evaluate_manifest, load_model, save_model, train

__all__ = [
    "ConvStream",
    "EvalReport",
    "FusionClassifier",
    "ManifestDataset",
    "ModalitySpec",
    "confusion_matrix",
    "evaluate",
    "evaluate_manifest",
    "load_index",
    "load_model",
    "per_class_recall",
    "save_model",
    "train",
]

__version__ = "0.1.0"
