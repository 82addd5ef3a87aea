"""Dataset access for stsim manifests (schema v1).

The harness consumes the generator's external interface only: the manifest
JSON plus the image files it points at. Images are resized to 224x224 and
cached as uint8 tensors; modality selection picks the tactile stream, the
visual stream, or both.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image

MANIFEST_SCHEMA_VERSION = 1
INPUT_SIZE = 224
MODALITIES = ("visual", "tactile", "both")


@dataclass(frozen=True)
class ModalitySpec:
    mode: str

    def __post_init__(self):
        if self.mode not in MODALITIES:
            raise ValueError(f"modality must be one of {MODALITIES}, got {self.mode!r}")

    @property
    def streams(self) -> tuple[str, ...]:
        return ("tactile", "visual") if self.mode == "both" else (self.mode,)


@dataclass
class SampleMeta:
    sample_id: str
    class_label: str
    split: str
    paths: dict[str, str]


@dataclass
class ManifestIndex:
    root: Path
    classes: list[str]
    samples: list[SampleMeta]

    def split(self, name: str) -> list[SampleMeta]:
        return [s for s in self.samples if s.split == name]


def load_index(manifest_path: str | Path) -> ManifestIndex:
    manifest_path = Path(manifest_path)
    doc = json.loads(manifest_path.read_text())
    version = doc.get("schema_version")
    if version != MANIFEST_SCHEMA_VERSION:
        raise ValueError(f"unsupported manifest schema_version {version!r}")
    samples = [
        SampleMeta(
            sample_id=rec["sample_id"],
            class_label=rec["class_label"],
            split=rec["split"],
            paths=dict(rec["paths"]),
        )
        for rec in doc["samples"]
    ]
    if not samples:
        raise ValueError(f"{manifest_path}: manifest contains no samples")
    classes = sorted({s.class_label for s in samples})
    return ManifestIndex(root=manifest_path.parent, classes=classes, samples=samples)


def _load_image(path: Path) -> torch.Tensor:
    with Image.open(path) as img:
        img = img.convert("RGB")
        if img.size != (INPUT_SIZE, INPUT_SIZE):
            img = img.resize((INPUT_SIZE, INPUT_SIZE), Image.BILINEAR)
        array = np.asarray(img, dtype=np.uint8)
    return torch.from_numpy(array.transpose(2, 0, 1).copy())


class ManifestDataset:
    """In-memory uint8 cache of one split, ready for batched training."""

    def __init__(self, index: ManifestIndex, split: str, modality: ModalitySpec):
        members = index.split(split)
        if not members:
            raise ValueError(f"split {split!r} is empty")
        counts = {c: 0 for c in index.classes}
        for meta in members:
            counts[meta.class_label] += 1
        empty = [c for c, n in counts.items() if n == 0]
        if empty:
            raise ValueError(f"split {split!r} has empty classes: {empty}")

        self.modality = modality
        self.classes = index.classes
        self.class_to_idx = {c: i for i, c in enumerate(index.classes)}
        self.labels = torch.tensor(
            [self.class_to_idx[m.class_label] for m in members], dtype=torch.long
        )
        self.streams: dict[str, torch.Tensor] = {}
        for stream in modality.streams:
            stack = []
            for meta in members:
                rel = meta.paths.get(stream)
                if rel is None:
                    raise ValueError(f"{meta.sample_id}: manifest lacks a {stream} image")
                stack.append(_load_image(index.root / rel))
            self.streams[stream] = torch.stack(stack)
        self.sample_ids = [m.sample_id for m in members]

    def __len__(self) -> int:
        return len(self.labels)

    def batches(self, batch_size: int, order: torch.Tensor | None = None):
        """Yield (inputs, labels); inputs is a tuple of centered float tensors."""
        idx = torch.arange(len(self)) if order is None else order
        for start in range(0, len(idx), batch_size):
            sel = idx[start : start + batch_size]
            inputs = tuple(
                self.streams[s][sel].to(torch.float32) / 255.0 - 0.5
                for s in self.modality.streams
            )
            yield inputs, self.labels[sel]
