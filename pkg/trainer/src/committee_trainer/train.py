"""Training loop: L1 loss, Adam, early stopping on plateaued epoch loss."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from .config import TrainerConfig
from .data import read_dataset
from .model import CommitteeScorer, save_model


@dataclass
class TrainResult:
    models: list[CommitteeScorer]
    metadata: dict

    @property
    def final_loss(self) -> float:
        return self.metadata["final_train_loss"]

    @property
    def epochs_used(self) -> list[int]:
        return self.metadata["epochs_used"]


def _train_single(features: torch.Tensor, labels: torch.Tensor, m: int,
                  config: TrainerConfig, seed: int) -> tuple[CommitteeScorer, float, int]:
    torch.manual_seed(seed)
    model = CommitteeScorer(m, config.hidden_layers, config.hidden_width)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    criterion = nn.L1Loss()
    generator = torch.Generator().manual_seed(seed)
    count = features.shape[0]

    best_loss = float("inf")
    best_state = {k: v.clone() for k, v in model.state_dict().items()}
    stale_epochs = 0
    epochs = 0
    for _ in range(config.max_epochs):
        epochs += 1
        order = torch.randperm(count, generator=generator)
        total = 0.0
        model.train()
        for start in range(0, count, config.batch_size):
            batch = order[start: start + config.batch_size]
            optimizer.zero_grad()
            output = model(features[batch])
            loss = criterion(output, labels[batch])
            loss.backward()
            optimizer.step()
            total += float(loss.item()) * len(batch)
        epoch_loss = total / count
        if epoch_loss < best_loss - config.min_improvement:
            best_loss = epoch_loss
            best_state = {k: v.clone() for k, v in model.state_dict().items()}
            stale_epochs = 0
        else:
            stale_epochs += 1
            if stale_epochs >= config.patience:
                break
    if best_loss == float("inf"):
        best_loss = epoch_loss
        best_state = {k: v.clone() for k, v in model.state_dict().items()}
    model.load_state_dict(best_state)
    model.eval()
    return model, best_loss, epochs


def train(config: TrainerConfig, dataset_path, out_path=None) -> TrainResult:
    """Train ``ensemble_count`` networks on one dataset file.

    The artifact records the election shape, the config, per-member epoch
    counts, and the best epoch loss, so runs are auditable.
    """
    records = read_dataset(dataset_path)
    m = records[0].m
    features = torch.tensor(np.array([r.features for r in records]), dtype=torch.float32)
    labels = torch.tensor(np.array([r.label for r in records]), dtype=torch.float32)

    models = []
    losses = []
    epochs_used = []
    for member in range(config.ensemble_count):
        model, loss, epochs = _train_single(features, labels, m, config, config.seed + member)
        models.append(model)
        losses.append(loss)
        epochs_used.append(epochs)

    metadata = {
        "m": m,
        "n": records[0].n,
        "k": records[0].k,
        "dist": records[0].dist,
        "axiom_set": records[0].axiom_set,
        "examples": len(records),
        "config": config.to_dict(),
        "final_train_loss": min(losses),
        "member_losses": losses,
        "epochs_used": epochs_used,
        "torch_version": torch.__version__,
    }
    result = TrainResult(models=models, metadata=metadata)
    if out_path is not None:
        save_model(out_path, models, metadata)
    return result
