"""Batch prediction to the score-record boundary format."""

from __future__ import annotations

import numpy as np
import torch

from .data import DataError, read_dataset, read_profiles, write_predictions
from .model import load_model


def _score_features(models, features: np.ndarray) -> np.ndarray:
    """Average raw ensemble outputs; the core decodes them by top-k."""
    tensor = torch.tensor(features, dtype=torch.float32)
    with torch.no_grad():
        stacked = torch.stack([model(tensor) for model in models])
    return stacked.mean(dim=0).numpy()


def predict_file(model_path, input_path, out_path) -> int:
    """Score a dataset file or a profile file; returns the record count."""
    models, metadata = load_model(model_path)
    m = metadata["m"]
    with open(input_path, "r", encoding="utf-8") as fp:
        first = ""
        for line in fp:
            if line.strip():
                first = line
                break
    if '"features"' in first:
        records = read_dataset(input_path)
        if records[0].m != m:
            raise DataError(f"dataset has m={records[0].m}, model expects {m}")
        features = np.array([r.features for r in records])
    else:
        profile_m, features = read_profiles(input_path)
        if profile_m != m:
            raise DataError(f"profiles have m={profile_m}, model expects {m}")
    scores = _score_features(models, features)
    write_predictions(out_path, scores)
    return len(scores)
