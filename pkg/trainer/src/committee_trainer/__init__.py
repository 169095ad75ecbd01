"""Multi-layer perceptron training for learned committee-selection rules.

The trainer exchanges data with the election core exclusively through files:
it reads line-delimited dataset records (features plus k-hot labels) or raw
profile records, and writes per-profile score vectors the core decodes by
top-k.
"""

from .config import TrainerConfig
from .data import (
    DatasetRecord,
    features_from_rankings,
    read_dataset,
    read_profiles,
    write_predictions,
)
from .model import CommitteeScorer, load_model, save_model
from .predict import predict_file
from .train import TrainResult, train

__all__ = [
    "TrainerConfig",
    "DatasetRecord",
    "features_from_rankings",
    "read_dataset",
    "read_profiles",
    "write_predictions",
    "CommitteeScorer",
    "load_model",
    "save_model",
    "predict_file",
    "TrainResult",
    "train",
]
