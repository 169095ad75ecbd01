"""File-boundary readers and writers.

Dataset records:
  {"m", "n", "k", "dist", "axiom_set", "features", "label", "min_violations"}
Profile records:
  {"m", "n", "dist", "seed", "rankings"}
Prediction records written here:
  {"index", "scores": [m floats]}

Profiles are featurized locally into the same three flattened m-by-m blocks
the dataset format carries: weak-majority matrix, normalized pairwise
preference counts, and normalized position counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class DatasetRecord:
    m: int
    n: int
    k: int
    dist: str
    axiom_set: str
    features: tuple
    label: tuple
    min_violations: int


def read_dataset(path) -> list[DatasetRecord]:
    """Read and validate dataset records; files must be homogeneous in
    (m, n, k, dist, axiom_set)."""
    records = []
    header = None
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"bad dataset record: {exc}", line=lineno) from None
            try:
                record = DatasetRecord(
                    m=int(raw["m"]),
                    n=int(raw["n"]),
                    k=int(raw["k"]),
                    dist=str(raw["dist"]),
                    axiom_set=str(raw["axiom_set"]),
                    features=tuple(float(x) for x in raw["features"]),
                    label=tuple(int(x) for x in raw["label"]),
                    min_violations=int(raw["min_violations"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"bad dataset record: {exc}", line=lineno) from None
            if len(record.features) != 3 * record.m * record.m:
                raise DataError(
                    f"expected {3 * record.m * record.m} features, got {len(record.features)}",
                    line=lineno,
                )
            if len(record.label) != record.m or sum(record.label) != record.k:
                raise DataError("label must be a k-hot vector of length m", line=lineno)
            key = (record.m, record.n, record.k, record.dist, record.axiom_set)
            if header is None:
                header = key
            elif key != header:
                raise DataError(
                    f"record {key} does not match the file header {header}", line=lineno
                )
            records.append(record)
    if not records:
        raise DataError(f"{path} contains no records")
    return records


def features_from_rankings(rankings, m: int) -> np.ndarray:
    """Featurize one profile: weak-majority, weighted, and ranking blocks."""
    rankings = np.asarray(rankings, dtype=np.int64)
    n = rankings.shape[0]
    positions = np.argsort(rankings, axis=1)
    prefers = (positions[:, :, None] < positions[:, None, :]).sum(axis=0)
    majority = (2 * prefers >= n).astype(float)
    np.fill_diagonal(majority, 0.0)
    weighted = prefers / n
    ranking_counts = np.zeros((m, m))
    np.add.at(ranking_counts, (rankings, np.tile(np.arange(m), (n, 1))), 1.0)
    ranking_counts /= n
    return np.concatenate([majority.ravel(), weighted.ravel(), ranking_counts.ravel()])


def read_profiles(path) -> tuple[int, np.ndarray]:
    """Featurize a profile file; returns (m, features array)."""
    rows = []
    m = None
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                record_m = int(raw["m"])
                rankings = raw["rankings"]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataError(f"bad profile record: {exc}", line=lineno) from None
            if m is None:
                m = record_m
            elif record_m != m:
                raise DataError(f"profile has m={record_m}, expected {m}", line=lineno)
            for ranking in rankings:
                if sorted(ranking) != list(range(m)):
                    raise DataError("rankings must be permutations of 0..m-1", line=lineno)
            rows.append(features_from_rankings(rankings, m))
    if not rows:
        raise DataError(f"{path} contains no profiles")
    return m, np.stack(rows)


def write_predictions(path, scores: np.ndarray):
    """One {"index", "scores"} record per row."""
    scores = np.asarray(scores, dtype=float)
    if not np.isfinite(scores).all():
        raise DataError("scores must be finite")
    with open(path, "w", encoding="utf-8") as fp:
        for index, row in enumerate(scores):
            record = {"index": index, "scores": [float(x) for x in row]}
            fp.write(json.dumps(record, separators=(",", ":")) + "\n")
