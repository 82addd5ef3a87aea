"""Training and evaluation entry points.

Adam at lr 1e-4 with batch size 100 by default. Runs are reproducible for a
fixed seed on a fixed backend; bit-level reproducibility across BLAS builds or
hardware is not promised.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
import torch.nn as nn

from .data import ManifestDataset, ModalitySpec, load_index
from .model import FusionClassifier
from .report import EvalReport

DEFAULT_LR = 1e-4
DEFAULT_BATCH = 100


def _predict(model: FusionClassifier, dataset: ManifestDataset, batch_size: int = 256):
    model.eval()
    outputs = []
    with torch.no_grad():
        for inputs, _ in dataset.batches(batch_size):
            outputs.append(model(inputs).argmax(dim=1))
    return torch.cat(outputs)


def evaluate(model: FusionClassifier, dataset: ManifestDataset, curve=()) -> EvalReport:
    predictions = _predict(model, dataset)
    return EvalReport.from_predictions(
        dataset.classes, dataset.modality.mode, dataset.labels.numpy(),
        predictions.numpy(), curve,
    )


def train(
    manifest_path: str | Path,
    modality: ModalitySpec,
    epochs: int,
    lr: float = DEFAULT_LR,
    batch_size: int = DEFAULT_BATCH,
    seed: int = 0,
    out_dir: str | Path | None = None,
) -> tuple[FusionClassifier, EvalReport]:
    """Train on the manifest's train split, track val accuracy per epoch."""
    index = load_index(manifest_path)
    train_set = ManifestDataset(index, "train", modality)
    val_set = ManifestDataset(index, "val", modality)

    torch.manual_seed(seed)
    model = FusionClassifier(n_streams=len(modality.streams), n_classes=len(index.classes))
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    loss_fn = nn.CrossEntropyLoss()
    shuffler = torch.Generator().manual_seed(seed)

    curve = []
    for _ in range(epochs):
        model.train()
        order = torch.randperm(len(train_set), generator=shuffler)
        for inputs, labels in train_set.batches(batch_size, order):
            optimizer.zero_grad()
            loss = loss_fn(model(inputs), labels)
            loss.backward()
            optimizer.step()
        val_pred = _predict(model, val_set)
        curve.append(float((val_pred == val_set.labels).to(torch.float64).mean()))

    report = evaluate(model, val_set, curve)
    if out_dir is not None:
        save_model(model, index.classes, modality, out_dir)
        report.save(out_dir)
    return model, report


def save_model(model, classes, modality: ModalitySpec, out_dir: str | Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / "weights.pt")
    meta = {"classes": list(classes), "modality": modality.mode}
    (out_dir / "model.json").write_text(json.dumps(meta, indent=2) + "\n")


def load_model(model_dir: str | Path) -> tuple[FusionClassifier, list[str], ModalitySpec]:
    model_dir = Path(model_dir)
    meta = json.loads((model_dir / "model.json").read_text())
    modality = ModalitySpec(meta["modality"])
    model = FusionClassifier(n_streams=len(modality.streams), n_classes=len(meta["classes"]))
    model.load_state_dict(torch.load(model_dir / "weights.pt", weights_only=True))
    return model, meta["classes"], modality


def evaluate_manifest(model_dir: str | Path, manifest_path: str | Path,
                      split: str = "val") -> EvalReport:
    """Deterministic inference of a saved model over one manifest split."""
    model, classes, modality = load_model(model_dir)
    index = load_index(manifest_path)
    if index.classes != classes:
        raise ValueError(
            f"class-set mismatch: model trained on {classes}, manifest has {index.classes}"
        )
    dataset = ManifestDataset(index, split, modality)
    return evaluate(model, dataset)
