"""Dataset construction, PrefLib SOC parsing, and the trainer file boundary.

A dataset example encodes one profile as three flattened m-by-m matrices
(majority, weighted, ranking, in that order) and labels it with the k-hot
encoding of the committee minimizing total axiom violations, found by
exhaustive search after a random renaming of the alternatives.

All files are line-delimited JSON records so the trainer side can live in a
separate process or language.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .axioms import ALL_AXIOMS, ROOT_AXIOMS
from .errors import DataFormatError, ParameterError
from .prefs import (
    DistributionSpec,
    PreferenceProfile,
    derive_approvals,
    rename_alternatives,
    sample_profile,
)
from .search import min_violation_committee

__all__ = [
    "build_features",
    "DatasetExample",
    "make_example",
    "generate_dataset",
    "write_dataset",
    "read_dataset",
    "parse_soc",
    "write_soc",
    "read_predictions",
    "read_committee_records",
    "write_committees",
    "AXIOM_SET_NAMES",
]

AXIOM_SET_NAMES = {"all": ALL_AXIOMS, "root": ROOT_AXIOMS}


def build_features(profile: PreferenceProfile) -> np.ndarray:
    """Flattened (majority, weighted, ranking) matrices; length 3*m*m.

    majority[i][j] is 1 iff a weak majority (at least half the voters)
    prefers i to j, with a zero diagonal; the weighted and ranking blocks are
    normalized by n.
    """
    n, m = profile.n, profile.m
    pos = profile.position_array
    prefers = (pos[:, :, None] < pos[:, None, :]).sum(axis=0)
    majority = (2 * prefers >= n).astype(float)
    np.fill_diagonal(majority, 0.0)
    weighted = prefers / n
    ranking = np.zeros((m, m))
    np.add.at(ranking, (profile.ranking_array, np.tile(np.arange(m), (n, 1))), 1.0)
    ranking /= n
    return np.concatenate([majority.ravel(), weighted.ravel(), ranking.ravel()])


@dataclass(frozen=True)
class DatasetExample:
    m: int
    n: int
    k: int
    dist: str
    axiom_set: str  # "all" | "root"
    features: tuple[float, ...]
    label: tuple[int, ...]
    min_violations: int

    def __post_init__(self):
        if self.axiom_set not in AXIOM_SET_NAMES:
            raise ParameterError(f"axiom_set must be 'all' or 'root', got {self.axiom_set!r}")
        if len(self.features) != 3 * self.m * self.m:
            raise ParameterError(
                f"features must have length {3 * self.m * self.m}, got {len(self.features)}"
            )
        if len(self.label) != self.m or sum(self.label) != self.k:
            raise ParameterError("label must be a k-hot vector of length m")

    @property
    def committee(self) -> tuple[int, ...]:
        return tuple(i for i, bit in enumerate(self.label) if bit)


def make_example(profile: PreferenceProfile, k: int, axiom_set: str, seed,
                 dist: str = "unknown") -> DatasetExample:
    """Rename alternatives, featurize, and label with the min-violation committee."""
    if axiom_set not in AXIOM_SET_NAMES:
        raise ParameterError(f"axiom_set must be 'all' or 'root', got {axiom_set!r}")
    renamed = rename_alternatives(profile, seed)
    features = build_features(renamed)
    committee, count = min_violation_committee(
        renamed, derive_approvals(renamed, k), k, AXIOM_SET_NAMES[axiom_set]
    )
    label = tuple(1 if a in set(committee) else 0 for a in range(profile.m))
    return DatasetExample(
        m=profile.m,
        n=profile.n,
        k=k,
        dist=dist,
        axiom_set=axiom_set,
        features=tuple(features.tolist()),
        label=label,
        min_violations=count,
    )


def generate_dataset(spec: DistributionSpec, m: int, n: int, k: int, count: int,
                     axiom_set: str, seed: int, dedup: bool = False) -> list[DatasetExample]:
    """Sample, rename, and label ``count`` examples; profiles are not
    deduplicated unless asked."""
    examples = []
    seen = set()
    index = 0
    attempts = 0
    while len(examples) < count:
        if attempts > 50 * count + 100:
            raise ParameterError("dedup cannot find enough distinct profiles")
        profile = sample_profile(spec, n, m, (int(seed), index, 0))
        attempts += 1
        index += 1
        if dedup:
            if profile.rankings in seen:
                continue
            seen.add(profile.rankings)
        examples.append(make_example(profile, k, axiom_set, (int(seed), index - 1, 1), spec.label()))
    return examples


# ---------------------------------------------------------------------------
# dataset wire format
# {"m","n","k","dist","axiom_set","features","label","min_violations"}


def write_dataset(path, examples):
    with open(path, "w", encoding="utf-8") as fp:
        for example in examples:
            record = {
                "m": example.m,
                "n": example.n,
                "k": example.k,
                "dist": example.dist,
                "axiom_set": example.axiom_set,
                "features": list(example.features),
                "label": list(example.label),
                "min_violations": example.min_violations,
            }
            fp.write(json.dumps(record, separators=(",", ":")) + "\n")


def read_dataset(path) -> list[DatasetExample]:
    """Read and validate a dataset file; records must be homogeneous in
    (m, n, k, dist, axiom_set)."""
    examples = []
    header = None
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"bad dataset record: {exc}", line=lineno) from None
            try:
                example = DatasetExample(
                    m=int(record["m"]),
                    n=int(record["n"]),
                    k=int(record["k"]),
                    dist=str(record["dist"]),
                    axiom_set=str(record["axiom_set"]),
                    features=tuple(float(x) for x in record["features"]),
                    label=tuple(int(x) for x in record["label"]),
                    min_violations=int(record["min_violations"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise DataFormatError(f"bad dataset record: {exc}", line=lineno) from None
            key = (example.m, example.n, example.k, example.dist, example.axiom_set)
            if header is None:
                header = key
            elif key != header:
                raise DataFormatError(
                    f"record {key} does not match the file's (m, n, k, dist, axiom_set) {header}",
                    line=lineno,
                )
            examples.append(example)
    return examples


# ---------------------------------------------------------------------------
# PrefLib SOC format


def parse_soc(text) -> PreferenceProfile:
    """Parse strict-complete-order election data.

    Lines starting with '#' are metadata; data lines are
    ``<count>: <alt>,<alt>,...`` with 1-indexed alternatives, each line a
    complete permutation.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    declared_m = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.upper().startswith("NUMBER ALTERNATIVES"):
                _, _, value = body.partition(":")
                try:
                    declared_m = int(value.strip())
                except ValueError:
                    raise DataFormatError(f"bad NUMBER ALTERNATIVES value {value!r}", line=lineno) from None
            continue
        count_text, sep, ranking_text = line.partition(":")
        if not sep:
            raise DataFormatError(f"expected '<count>: <ranking>', got {line!r}", line=lineno)
        try:
            count = int(count_text.strip())
        except ValueError:
            raise DataFormatError(f"bad voter count {count_text.strip()!r}", line=lineno) from None
        if count < 1:
            raise DataFormatError(f"voter count must be positive, got {count}", line=lineno)
        try:
            ranking = tuple(int(part.strip()) for part in ranking_text.split(","))
        except ValueError:
            raise DataFormatError(f"bad ranking {ranking_text.strip()!r}", line=lineno) from None
        rows.append((lineno, count, ranking))
    if not rows:
        raise DataFormatError("no preference data lines found", line=1)
    m = declared_m if declared_m is not None else len(rows[0][2])
    rankings = []
    for lineno, count, ranking in rows:
        if sorted(ranking) != list(range(1, m + 1)):
            raise DataFormatError(
                f"ranking {ranking} is not a permutation of 1..{m}", line=lineno
            )
        rankings.extend([tuple(a - 1 for a in ranking)] * count)
    return PreferenceProfile(m, tuple(rankings))


def write_soc(profile: PreferenceProfile) -> str:
    """Inverse of ``parse_soc``: runs of consecutive identical rankings are
    grouped, so parsing the output reproduces the exact voter sequence."""
    lines = [
        f"# NUMBER ALTERNATIVES: {profile.m}",
        f"# NUMBER VOTERS: {profile.n}",
    ]
    for ranking, run in itertools.groupby(profile.rankings):
        count = sum(1 for _ in run)
        lines.append(f"{count}: " + ",".join(str(a + 1) for a in ranking))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# committee / prediction records


def write_committees(path, committees, rule: str):
    """Committee wire format: {"profile_index", "rule", "committee"} per line."""
    with open(path, "w", encoding="utf-8") as fp:
        for index, committee in enumerate(committees):
            record = {"profile_index": index, "rule": rule, "committee": [int(a) for a in committee]}
            fp.write(json.dumps(record, separators=(",", ":")) + "\n")


def _decode_scores(scores, m: int, k: int, lineno: int) -> tuple[int, ...]:
    if len(scores) != m:
        raise DataFormatError(f"expected {m} scores, got {len(scores)}", line=lineno)
    values = np.asarray([float(s) for s in scores])
    if not np.isfinite(values).all():
        raise DataFormatError("scores must be finite", line=lineno)
    order = np.lexsort((np.arange(m), -values))
    return tuple(sorted(int(a) for a in order[:k]))


def _decode_committee(members, m: int, k: int, lineno: int) -> tuple[int, ...]:
    committee = tuple(sorted(int(a) for a in members))
    if len(committee) != k or len(set(committee)) != k:
        raise DataFormatError(f"expected a size-{k} committee, got {members}", line=lineno)
    if committee[0] < 0 or committee[-1] >= m:
        raise DataFormatError(f"committee {members} out of range 0..{m - 1}", line=lineno)
    return committee


def read_predictions(path, m: int, k: int) -> list[tuple[int, ...]]:
    """Read trainer predictions: {"index", "scores": [m floats]} or
    {"index", "committee": [k ints]}. Score records decode by top-k with
    ties to the lower index; indices must run 0, 1, 2, ... with no gaps."""
    committees = []
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"bad prediction record: {exc}", line=lineno) from None
            if "index" not in record:
                raise DataFormatError("prediction record missing 'index'", line=lineno)
            if int(record["index"]) != len(committees):
                raise DataFormatError(
                    f"prediction index {record['index']} out of order (expected {len(committees)})",
                    line=lineno,
                )
            if "scores" in record:
                committees.append(_decode_scores(record["scores"], m, k, lineno))
            elif "committee" in record:
                committees.append(_decode_committee(record["committee"], m, k, lineno))
            else:
                raise DataFormatError("prediction record needs 'scores' or 'committee'", line=lineno)
    return committees


def read_committee_records(path, m: int, k: int) -> list[tuple[int, ...]]:
    """Tolerant committee reader for evaluation: accepts the committee wire
    format ({"profile_index", "committee"}) as well as prediction records."""
    committees = []
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"bad committee record: {exc}", line=lineno) from None
            index = record.get("index", record.get("profile_index"))
            if index is None:
                raise DataFormatError("committee record needs 'index' or 'profile_index'", line=lineno)
            if int(index) != len(committees):
                raise DataFormatError(
                    f"record index {index} out of order (expected {len(committees)})", line=lineno
                )
            if "committee" in record:
                committees.append(_decode_committee(record["committee"], m, k, lineno))
            elif "scores" in record:
                committees.append(_decode_scores(record["scores"], m, k, lineno))
            else:
                raise DataFormatError("committee record needs 'committee' or 'scores'", line=lineno)
    return committees
