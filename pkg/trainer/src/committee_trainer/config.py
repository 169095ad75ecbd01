"""Training hyperparameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class TrainerConfig:
    hidden_layers: int = 5
    hidden_width: int = 256
    learning_rate: float = 1e-4
    max_epochs: int = 50
    patience: int = 10          # epochs without improvement before stopping
    min_improvement: float = 5e-4
    ensemble_count: int = 1     # raw outputs are averaged before decoding
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        for field in ("hidden_layers", "hidden_width", "max_epochs", "patience",
                      "ensemble_count", "batch_size"):
            if getattr(self, field) < 1:
                raise ValueError(f"{field} must be a positive integer")
        if self.patience > self.max_epochs:
            raise ValueError("patience cannot exceed max_epochs")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainerConfig":
        return cls(**data)
