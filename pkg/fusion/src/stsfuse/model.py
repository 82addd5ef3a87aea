"""Dual-stream convolutional classifier.

Each modality runs through its own small convolutional stream (3 conv blocks,
pooled to a coarse 4x4 spatial map); stream features are concatenated and
fused by a fully connected head. Single-modality runs use one stream and the
same head shape.

Two choices matter for the tactile channel, whose images are mostly
flat-membrane gray with thin structured bands: the 4x4 pool rather than a
global average keeps silhouette layout visible to the head, and GroupNorm
rather than BatchNorm keeps features batch-independent (with a few hundred
samples, batch statistics leak label information during training and the
eval-mode running stats collapse).
"""

from __future__ import annotations

import torch
import torch.nn as nn

POOL_GRID = 4
CHANNELS = 64
FEATURE_DIM = CHANNELS * POOL_GRID * POOL_GRID
HEAD_HIDDEN = 64


class ConvStream(nn.Module):
    def __init__(self):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv2d(3, 16, kernel_size=7, stride=4, padding=3),
            nn.GroupNorm(4, 16),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(2),
            nn.Conv2d(16, 32, kernel_size=3, stride=2, padding=1),
            nn.GroupNorm(8, 32),
            nn.ReLU(inplace=True),
            nn.Conv2d(32, CHANNELS, kernel_size=3, stride=2, padding=1),
            nn.GroupNorm(8, CHANNELS),
            nn.ReLU(inplace=True),
            nn.AdaptiveAvgPool2d(POOL_GRID),
            nn.Flatten(),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x)


class FusionClassifier(nn.Module):
    """n_streams conv streams -> concatenated features -> fc head."""

    def __init__(self, n_streams: int, n_classes: int):
        super().__init__()
        self.streams = nn.ModuleList(ConvStream() for _ in range(n_streams))
        self.head = nn.Sequential(
            nn.Linear(n_streams * FEATURE_DIM, HEAD_HIDDEN),
            nn.ReLU(inplace=True),
            nn.Linear(HEAD_HIDDEN, n_classes),
        )

    def forward(self, inputs: tuple[torch.Tensor, ...]) -> torch.Tensor:
        features = [stream(x) for stream, x in zip(self.streams, inputs)]
        return self.head(torch.cat(features, dim=1))
