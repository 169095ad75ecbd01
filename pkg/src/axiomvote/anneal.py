"""Simulated annealing over positional score vectors, minimizing violation rate.

The chain starts at the Borda vector and proposes Gaussian perturbations of
one interior coordinate (clamped to [0, 1], interior re-sorted descending so
vectors stay monotone with endpoints 1 and 0). Acceptance is Metropolis on
the violation-rate difference with a geometric temperature schedule; the
best-seen vector is returned, not the last accepted one.

Per-profile election data (position-count matrices and per-committee
violation counts) is computed once up front, so each step costs one batched
scoring pass plus table lookups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .axioms import ALL_AXIOMS, AxiomId, ElectionContext
from .errors import ParameterError
from .rules import ScoreVector

__all__ = ["AnnealConfig", "AnnealResult", "optimize_score_vector", "positional_scoring_avr"]


@dataclass(frozen=True)
class AnnealConfig:
    m: int
    k: int
    axiom_set: tuple[AxiomId, ...] = ALL_AXIOMS
    steps: int = 1000
    train_profiles: int = 2000
    initial_vector: ScoreVector | None = None  # None = Borda
    proposal_scale: float = 0.1
    t0: float = 0.05
    decay: float = 0.995
    seed: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ParameterError("steps must be >= 1")
        if self.train_profiles < 1:
            raise ParameterError("train_profiles must be >= 1")
        if not 1 <= self.k < self.m:
            raise ParameterError(f"k must satisfy 1 <= k < m, got k={self.k}, m={self.m}")
        object.__setattr__(self, "axiom_set", tuple(AxiomId(a) for a in self.axiom_set))
        if not self.axiom_set:
            raise ParameterError("axiom set must be non-empty")
        if self.initial_vector is not None and self.initial_vector.m != self.m:
            raise ParameterError("initial vector length must equal m")


@dataclass
class AnnealResult:
    vector: ScoreVector
    train_avr: float
    eval_avr: float | None
    best_history: list[float]
    config: AnnealConfig

    def to_record(self, axiom_set_name: str | None = None) -> dict:
        return {
            "k": self.config.k,
            "axiom_set": axiom_set_name or ",".join(a.value for a in self.config.axiom_set),
            "vector": [float(s) for s in self.vector.scores],
            "train_avr": self.train_avr,
            "eval_avr": self.eval_avr,
            "seed": self.config.seed,
        }


class _PositionalBatch:
    """Batched scoring-rule evaluation over a fixed profile slice."""

    def __init__(self, profiles, m: int, k: int, axioms: tuple[AxiomId, ...]):
        profiles = list(profiles)
        if not profiles:
            raise ParameterError("empty profile slice")
        self.m, self.k = m, k
        self.count = len(profiles)
        self.n_axioms = len(axioms)
        position_counts = np.empty((self.count, m, m))
        tables = []
        rank_lookup = None
        for p, profile in enumerate(profiles):
            if profile.m != m:
                raise ParameterError("profiles have mixed m")
            ctx = ElectionContext(profile, k)
            if rank_lookup is None:
                bits = (ctx.comm_mask * (1 << np.arange(m, dtype=np.int64))).sum(axis=1)
                rank_lookup = np.full(1 << m, -1, dtype=np.int64)
                rank_lookup[bits] = np.arange(len(ctx.committees))
            matrix = np.zeros((m, m))
            rows = profile.ranking_array
            np.add.at(matrix, (rows, np.tile(np.arange(m), (profile.n, 1))), 1.0)
            position_counts[p] = matrix
            tables.append(ctx.violation_table(axioms).sum(axis=1).astype(np.int32))
        self.position_counts = position_counts
        self.violations = np.stack(tables)
        self.rank_lookup = rank_lookup
        self._row_index = np.arange(self.count)

    def loss(self, scores: np.ndarray) -> float:
        """Violation rate of the positional rule given by ``scores``."""
        totals = self.position_counts @ scores  # (count, m)
        order = np.argsort(-totals, axis=1, kind="stable")[:, : self.k]
        masks = (1 << order.astype(np.int64)).sum(axis=1)
        ranks = self.rank_lookup[masks]
        return float(self.violations[self._row_index, ranks].sum()) / (self.count * self.n_axioms)


def positional_scoring_avr(vector: ScoreVector, profiles, k: int, axiom_set) -> float:
    """Violation rate of one positional scoring rule on a profile set."""
    axioms = tuple(AxiomId(a) for a in axiom_set)
    if not axioms:
        raise ParameterError("axiom set must be non-empty")
    batch = _PositionalBatch(profiles, vector.m, k, axioms)
    return batch.loss(np.asarray([float(s) for s in vector.scores]))


def _propose(scores: np.ndarray, scale: float, rng: np.random.Generator) -> np.ndarray:
    """Perturb one interior coordinate, clamp to [0, 1], restore monotonicity."""
    out = scores.copy()
    interior = len(scores) - 2
    idx = 1 + int(rng.integers(interior))
    out[idx] = min(1.0, max(0.0, out[idx] + rng.normal(0.0, scale)))
    out[1:-1] = np.sort(out[1:-1])[::-1]
    return out


def optimize_score_vector(config: AnnealConfig, profiles) -> AnnealResult:
    """Anneal a score vector on the first ``train_profiles`` profiles.

    Any remaining profiles form a held-out slice; the returned ``eval_avr``
    is the best vector's violation rate there (None if no holdout given).
    """
    profiles = list(profiles)
    if len(profiles) < config.train_profiles:
        raise ParameterError(
            f"need at least {config.train_profiles} profiles, got {len(profiles)}"
        )
    if config.m < 3:
        raise ParameterError("annealing needs m >= 3 so the vector has an interior")
    train = profiles[: config.train_profiles]
    holdout = profiles[config.train_profiles:]
    batch = _PositionalBatch(train, config.m, config.k, config.axiom_set)
    rng = np.random.default_rng(config.seed)

    initial = config.initial_vector or ScoreVector.borda(config.m)
    current = np.asarray([float(s) for s in initial.scores])
    current_loss = batch.loss(current)
    best, best_loss = current.copy(), current_loss
    history = [best_loss]
    temperature = config.t0
    for _ in range(config.steps):
        candidate = _propose(current, config.proposal_scale, rng)
        candidate_loss = batch.loss(candidate)
        delta = candidate_loss - current_loss
        if delta <= 0 or (temperature > 0 and rng.random() < np.exp(-delta / temperature)):
            current, current_loss = candidate, candidate_loss
            if current_loss < best_loss:
                best, best_loss = current.copy(), current_loss
        history.append(best_loss)
        temperature *= config.decay

    vector = ScoreVector(tuple(best.tolist()))
    eval_avr = None
    if holdout:
        eval_batch = _PositionalBatch(holdout, config.m, config.k, config.axiom_set)
        eval_avr = eval_batch.loss(best)
    return AnnealResult(
        vector=vector,
        train_avr=best_loss,
        eval_avr=eval_avr,
        best_history=history,
        config=config,
    )
