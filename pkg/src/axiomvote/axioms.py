"""Intraprofile axiom checkers and the implication-graph audit.

Each checker decides, for one (profile, approvals, committee, k) tuple,
whether the axiom is violated (1) or not (0). All group-size thresholds
(n/k, l*n/k, ...) are compared in exact integer arithmetic. The workhorse is
``ElectionContext``, which evaluates every axiom for every size-k committee
of a profile in one vectorized pass; single-committee queries index into it.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import CapacityError, ParameterError
from .prefs import ApprovalProfile, PreferenceProfile, derive_approvals

__all__ = [
    "AxiomId",
    "ALL_AXIOMS",
    "ROOT_AXIOMS",
    "MAX_ENUMERATION_M",
    "axiom_set_from_name",
    "ElectionContext",
    "violates",
    "evaluate_all",
    "ImplicationEdge",
    "IMPLICATION_EDGES",
    "AuditReport",
    "implication_audit",
]

MAX_ENUMERATION_M = 12


class AxiomId(str, Enum):
    MAJORITY_WINNER = "majoritywinner"
    MAJORITY_LOSER = "majorityloser"
    CONDORCET_WINNER = "condorcetwinner"
    CONDORCET_LOSER = "condorcetloser"
    STRONG_PARETO = "strongpareto"
    FIXED_MAJORITY = "fixedmajority"
    STRONG_UNANIMITY = "strongunanimity"
    DUMMETTS = "dummetts"
    LOCAL_STABILITY = "localstability"
    SOLID_COALITIONS = "solidcoalitions"
    CORE = "core"
    JR = "jr"
    EJR = "ejr"


ALL_AXIOMS: tuple[AxiomId, ...] = tuple(AxiomId)

ROOT_AXIOMS: tuple[AxiomId, ...] = (
    AxiomId.MAJORITY_LOSER,
    AxiomId.CONDORCET_WINNER,
    AxiomId.STRONG_PARETO,
    AxiomId.DUMMETTS,
    AxiomId.LOCAL_STABILITY,
    AxiomId.CORE,
)


def axiom_set_from_name(name: str) -> tuple[AxiomId, ...]:
    """Resolve 'all', 'root', or a comma-separated list of axiom ids."""
    name = name.strip().lower()
    if name == "all":
        return ALL_AXIOMS
    if name == "root":
        return ROOT_AXIOMS
    axioms = []
    for part in name.split(","):
        part = part.strip()
        try:
            axioms.append(AxiomId(part))
        except ValueError:
            raise ParameterError(f"unknown axiom id {part!r}") from None
    if not axioms:
        raise ParameterError("empty axiom set")
    return tuple(dict.fromkeys(axioms))


class ElectionContext:
    """Precomputed election data for one (profile, approvals, k).

    Builds, lazily and per axiom, a boolean column over all C(m, k)
    committees in lexicographic order; committees are addressed by their
    bitmask rank so lookups are O(1).
    """

    def __init__(self, profile: PreferenceProfile, k: int, approvals: ApprovalProfile | None = None):
        if not 1 <= k < profile.m:
            raise ParameterError(f"k must satisfy 1 <= k < m, got k={k}, m={profile.m}")
        if profile.m > MAX_ENUMERATION_M:
            raise CapacityError(
                f"committee enumeration is guarded at m <= {MAX_ENUMERATION_M}, got m={profile.m}"
            )
        if approvals is not None and (
            approvals.m != profile.m or approvals.n != profile.n or approvals.k != k
        ):
            raise ParameterError("approval profile does not match the election (m, n, k)")
        self.profile = profile
        self._approvals = approvals  # None means top-k truncation, built lazily
        self.k = k
        self.n = profile.n
        self.m = profile.m
        self.committees: list[tuple[int, ...]] = list(itertools.combinations(range(self.m), k))
        self._columns: dict[AxiomId, np.ndarray] = {}

    @cached_property
    def approvals(self) -> ApprovalProfile:
        if self._approvals is not None:
            return self._approvals
        return derive_approvals(self.profile, self.k)

    # -- shared precomputations ------------------------------------------

    @cached_property
    def comm_mask(self) -> np.ndarray:
        mask = np.zeros((len(self.committees), self.m), dtype=bool)
        for i, committee in enumerate(self.committees):
            mask[i, list(committee)] = True
        return mask

    @cached_property
    def _mask_rank(self) -> np.ndarray:
        rank = np.full(1 << self.m, -1, dtype=np.int64)
        bits = (self.comm_mask * (1 << np.arange(self.m, dtype=np.int64))).sum(axis=1)
        rank[bits] = np.arange(len(self.committees))
        return rank

    def committee_index(self, committee) -> int:
        members = tuple(sorted(int(a) for a in committee))
        if len(members) != self.k or len(set(members)) != self.k:
            raise ParameterError(f"committee {committee} is not a size-{self.k} set")
        if members[0] < 0 or members[-1] >= self.m:
            raise ParameterError(f"committee {committee} out of range 0..{self.m - 1}")
        return int(self._mask_rank[sum(1 << a for a in members)])

    @cached_property
    def pos(self) -> np.ndarray:
        return self.profile.position_array

    @cached_property
    def approval_matrix(self) -> np.ndarray:
        if self._approvals is None:
            return self.pos < self.k  # top-k truncation
        return self._approvals.matrix

    @cached_property
    def overlap(self) -> np.ndarray:
        """(n, n_committees) per-voter approved-member counts."""
        return self.approval_matrix.astype(np.int64) @ self.comm_mask.T.astype(np.int64)

    @cached_property
    def pairwise(self) -> np.ndarray:
        """pairwise[i, j] = number of voters preferring i to j."""
        pos = self.pos
        return (pos[:, :, None] < pos[:, None, :]).sum(axis=0).astype(np.int64)

    @cached_property
    def beats(self) -> np.ndarray:
        """Strict pairwise majority: 2 * pairwise > n."""
        b = 2 * self.pairwise > self.n
        np.fill_diagonal(b, False)
        return b

    @cached_property
    def first_count(self) -> np.ndarray:
        return np.bincount(self.profile.ranking_array[:, 0], minlength=self.m)

    @cached_property
    def last_count(self) -> np.ndarray:
        return np.bincount(self.profile.ranking_array[:, -1], minlength=self.m)

    @cached_property
    def _topk_counter(self) -> Counter:
        rows = np.sort(self.profile.ranking_array[:, : self.k], axis=1)
        return Counter(map(tuple, rows.tolist()))

    def _subset_masks(self, size: int) -> np.ndarray:
        subsets = list(itertools.combinations(range(self.m), size))
        mask = np.zeros((len(subsets), self.m), dtype=np.int64)
        for i, subset in enumerate(subsets):
            mask[i, list(subset)] = 1
        return mask

    # -- axiom columns (True = violated) ---------------------------------

    def axiom_column(self, axiom: AxiomId) -> np.ndarray:
        if axiom not in self._columns:
            self._columns[axiom] = getattr(self, "_col_" + axiom.value)()
        return self._columns[axiom]

    def _col_majoritywinner(self):
        required = self.first_count >= (self.n + 1) // 2
        return (required[None, :] & ~self.comm_mask).any(axis=1)

    def _col_majorityloser(self):
        barred = self.last_count >= (self.n + 1) // 2
        return (barred[None, :] & self.comm_mask).any(axis=1)

    @cached_property
    def condorcet_flags(self) -> np.ndarray:
        """True where every member beats every non-member by a weak majority.

        With an even number of voters, exact pairwise ties support both
        directions, so several committees can qualify; the lexicographically
        least one is treated as canonical.
        """
        weak = 2 * self.pairwise >= self.n
        np.fill_diagonal(weak, False)
        members = self.comm_mask.astype(np.int64)
        not_beaten = (~weak).astype(np.int64)
        failing_pairs = ((members @ not_beaten) * (1 - members)).sum(axis=1)
        return failing_pairs == 0

    @cached_property
    def condorcet_committee_index(self) -> int | None:
        hits = np.flatnonzero(self.condorcet_flags)
        return int(hits[0]) if len(hits) else None

    def _col_condorcetwinner(self):
        out = np.zeros(len(self.committees), dtype=bool)
        index = self.condorcet_committee_index
        if index is not None:
            out[:] = True
            out[index] = False
        return out

    def _col_condorcetloser(self):
        members = self.comm_mask.astype(np.int64)
        not_beats = (~self.beats).astype(np.int64)
        failing_pairs = (((1 - members) @ not_beats) * members).sum(axis=1)
        return failing_pairs == 0

    def _col_strongpareto(self):
        overlap = self.overlap
        at_least = (overlap[:, None, :] >= overlap[:, :, None]).all(axis=0)
        better = (overlap[:, None, :] > overlap[:, :, None]).any(axis=0)
        return (at_least & better).any(axis=1)

    def _col_fixedmajority(self):
        out = np.zeros(len(self.committees), dtype=bool)
        top, count = self._topk_counter.most_common(1)[0]
        if 2 * count > self.n:
            out[:] = True
            out[self.committee_index(top)] = False
        return out

    def _col_strongunanimity(self):
        out = np.zeros(len(self.committees), dtype=bool)
        if len(self._topk_counter) == 1:
            (top,) = self._topk_counter
            out[:] = True
            out[self.committee_index(top)] = False
        return out

    def _col_dummetts(self):
        out = np.zeros(len(self.committees), dtype=bool)
        rankings = self.profile.ranking_array
        for ell in range(1, self.k + 1):
            counter = Counter(map(tuple, np.sort(rankings[:, :ell], axis=1).tolist()))
            for top_set, count in counter.items():
                if count * self.k >= ell * self.n:
                    required = np.zeros(self.m, dtype=bool)
                    required[list(top_set)] = True
                    out |= (required[None, :] & ~self.comm_mask).any(axis=1)
        return out

    def _col_localstability(self):
        quota = -(-self.n // self.k)
        pos = self.pos
        member_pos = np.where(self.comm_mask[None, :, :], pos[:, None, :], self.m + 1)
        min_member_pos = member_pos.min(axis=2)  # (n, n_committees)
        counts = (pos[:, None, :] < min_member_pos[:, :, None]).sum(axis=0)  # (n_committees, m)
        return ((counts >= quota) & ~self.comm_mask).any(axis=1)

    def _col_solidcoalitions(self):
        required = self.first_count * self.k >= self.n
        return (required[None, :] & ~self.comm_mask).any(axis=1)

    def _col_jr(self):
        uncovered = (self.overlap == 0).astype(np.int64)  # (n, n_committees)
        counts = self.approval_matrix.T.astype(np.int64) @ uncovered  # (m, n_committees)
        return (counts * self.k >= self.n).any(axis=0)

    def _col_ejr(self):
        out = np.zeros(len(self.committees), dtype=bool)
        approval = self.approval_matrix.astype(np.int64)
        for ell in range(1, self.k + 1):
            subset_mask = self._subset_masks(ell)
            joint = approval @ subset_mask.T  # (n, n_subsets): |App(v) & T|
            approves_all = joint == ell
            if not approves_all.any():
                continue
            deficient = self.overlap < ell  # (n, n_committees)
            counts = approves_all.T.astype(np.int64) @ deficient.astype(np.int64)
            out |= (counts * self.k >= ell * self.n).any(axis=0)
        return out

    def _col_core(self):
        out = np.zeros(len(self.committees), dtype=bool)
        approval = self.approval_matrix.astype(np.int64)
        overlap = self.overlap
        for size in range(1, self.k + 1):
            subset_mask = self._subset_masks(size)
            joint = approval @ subset_mask.T  # (n, n_subsets): |App(v) & T|
            prefers = joint[:, :, None] > overlap[:, None, :]  # (n, n_subsets, n_committees)
            counts = prefers.sum(axis=0)
            out |= (counts * self.k >= size * self.n).any(axis=0)
        return out

    # -- queries -----------------------------------------------------------

    def violation_table(self, axioms: tuple[AxiomId, ...] = ALL_AXIOMS) -> np.ndarray:
        """(n_committees, len(axioms)) 0/1 matrix in committee-lex order."""
        if not axioms:
            return np.zeros((len(self.committees), 0), dtype=np.uint8)
        return np.stack([self.axiom_column(a) for a in axioms], axis=1).astype(np.uint8)

    def violates(self, axiom: AxiomId, committee) -> int:
        return int(self.axiom_column(axiom)[self.committee_index(committee)])

    def evaluate_all(self, committee, axioms: tuple[AxiomId, ...]) -> dict[AxiomId, int]:
        idx = self.committee_index(committee)
        return {a: int(self.axiom_column(a)[idx]) for a in axioms}


def violates(axiom: AxiomId, profile: PreferenceProfile, approvals: ApprovalProfile,
             committee, k: int) -> int:
    """1 iff the axiom's condition is violated by the committee on this election."""
    return ElectionContext(profile, k, approvals).violates(AxiomId(axiom), committee)


def evaluate_all(profile: PreferenceProfile, approvals: ApprovalProfile, committee, k: int,
                 axiom_set) -> dict[AxiomId, int]:
    """Batch of ``violates`` over an axiom set; an empty set yields an empty map."""
    axioms = tuple(AxiomId(a) for a in axiom_set)
    if not axioms:
        return {}
    return ElectionContext(profile, k, approvals).evaluate_all(committee, axioms)


# ---------------------------------------------------------------------------
# implication audit


@dataclass(frozen=True)
class ImplicationEdge:
    """Satisfying ``premise`` is claimed to entail satisfying ``conclusion``.

    ``min_k`` carries the 'k >= 2' side conditions; edges that additionally
    assume voters approve exactly their top-k alternatives hold by
    construction here, since approvals are always top-k truncations.
    """

    premise: AxiomId
    conclusion: AxiomId
    min_k: int = 1

    @property
    def name(self) -> str:
        return f"{self.premise.value}->{self.conclusion.value}"


IMPLICATION_EDGES: tuple[ImplicationEdge, ...] = (
    ImplicationEdge(AxiomId.CONDORCET_WINNER, AxiomId.FIXED_MAJORITY),
    ImplicationEdge(AxiomId.SOLID_COALITIONS, AxiomId.MAJORITY_WINNER, min_k=2),
    ImplicationEdge(AxiomId.SOLID_COALITIONS, AxiomId.JR),
    ImplicationEdge(AxiomId.LOCAL_STABILITY, AxiomId.SOLID_COALITIONS),
    ImplicationEdge(AxiomId.LOCAL_STABILITY, AxiomId.STRONG_UNANIMITY),
    ImplicationEdge(AxiomId.EJR, AxiomId.STRONG_UNANIMITY),
    ImplicationEdge(AxiomId.STRONG_PARETO, AxiomId.STRONG_UNANIMITY),
    ImplicationEdge(AxiomId.LOCAL_STABILITY, AxiomId.CONDORCET_LOSER, min_k=2),
    ImplicationEdge(AxiomId.FIXED_MAJORITY, AxiomId.STRONG_UNANIMITY),
    ImplicationEdge(AxiomId.DUMMETTS, AxiomId.SOLID_COALITIONS),
    ImplicationEdge(AxiomId.DUMMETTS, AxiomId.STRONG_UNANIMITY),
    ImplicationEdge(AxiomId.CORE, AxiomId.EJR),
    ImplicationEdge(AxiomId.EJR, AxiomId.JR),
)


@dataclass
class AuditReport:
    k: int
    profiles_checked: int = 0
    pairs_checked: dict[str, int] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(self.counts.values())

    def total_counterexamples(self) -> int:
        return sum(self.counts.values())

    def summary(self) -> str:
        lines = [f"profiles={self.profiles_checked} k={self.k}"]
        for name in sorted(self.counts):
            lines.append(f"  {name}: {self.counts[name]} counterexamples"
                         f" over {self.pairs_checked[name]} pairs")
        return "\n".join(lines)


def implication_audit(profiles, k: int, edges: tuple[ImplicationEdge, ...] = IMPLICATION_EDGES,
                      max_recorded: int | None = 1000) -> AuditReport:
    """Check every edge on every (profile, committee) pair.

    A counterexample is a pair where the premise axiom is satisfied and the
    conclusion axiom is violated. The report lists violations; it never
    raises on them.
    """
    report = AuditReport(k=k)
    active = [e for e in edges if k >= e.min_k]
    for edge in active:
        report.pairs_checked[edge.name] = 0
        report.counts[edge.name] = 0
    for index, profile in enumerate(profiles):
        ctx = ElectionContext(profile, k)
        for edge in active:
            premise_ok = ~ctx.axiom_column(edge.premise)
            conclusion_bad = ctx.axiom_column(edge.conclusion)
            hits = premise_ok & conclusion_bad
            report.pairs_checked[edge.name] += len(ctx.committees)
            count = int(hits.sum())
            if count:
                report.counts[edge.name] += count
                for comm_idx in np.flatnonzero(hits):
                    if max_recorded is not None and len(report.counterexamples) >= max_recorded:
                        break
                    report.counterexamples.append(
                        {
                            "profile_index": index,
                            "committee": list(ctx.committees[comm_idx]),
                            "edge": edge.name,
                        }
                    )
        report.profiles_checked += 1
    return report
