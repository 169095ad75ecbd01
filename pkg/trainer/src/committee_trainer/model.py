"""The committee-scoring perceptron and its on-disk artifact format.

An artifact is a directory holding ``model.pt`` (a list of state dicts, one
per ensemble member) and ``metadata.json`` describing the election shape and
training configuration.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from torch import nn

from .config import TrainerConfig


class CommitteeScorer(nn.Module):
    """MLP from flattened election matrices to per-alternative scores."""

    def __init__(self, m: int, hidden_layers: int = 5, hidden_width: int = 256):
        super().__init__()
        layers = []
        width = 3 * m * m
        for _ in range(hidden_layers):
            layers.append(nn.Linear(width, hidden_width))
            layers.append(nn.ReLU())
            width = hidden_width
        layers.append(nn.Linear(width, m))
        self.net = nn.Sequential(*layers)
        self.m = m

    def forward(self, x):
        return self.net(x)


def save_model(path, models: list[CommitteeScorer], metadata: dict):
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    torch.save([model.state_dict() for model in models], path / "model.pt")
    with open(path / "metadata.json", "w", encoding="utf-8") as fp:
        json.dump(metadata, fp, indent=2)


def load_model(path) -> tuple[list[CommitteeScorer], dict]:
    path = Path(path)
    with open(path / "metadata.json", "r", encoding="utf-8") as fp:
        metadata = json.load(fp)
    config = TrainerConfig.from_dict(metadata["config"])
    states = torch.load(path / "model.pt", map_location="cpu", weights_only=True)
    models = []
    for state in states:
        model = CommitteeScorer(metadata["m"], config.hidden_layers, config.hidden_width)
        model.load_state_dict(state)
        model.eval()
        models.append(model)
    return models, metadata
