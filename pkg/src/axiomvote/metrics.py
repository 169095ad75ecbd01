"""Axiom violation rate, rule distance, and the experiment sweep driver.

All rates are accumulated as exact integer counts and divided once at the
end, so reports are bit-reproducible. Sweep cells carry their own derived
seeds; any cell can be replayed in isolation.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .axioms import ALL_AXIOMS, AxiomId, ElectionContext
from .errors import CapacityError, ParameterError
from .prefs import DistributionSpec, child_seed, rename_alternatives, sample_profile
from .rules import (
    OPTIMIZING_RULES,
    SEEDED_RULES,
    RuleSpec,
    _optimizing_best_index,
    elect,
    random_committee,
)

__all__ = [
    "avr",
    "rule_distance",
    "distance_matrix",
    "avr_sweep",
    "CellResult",
    "EvaluationReport",
    "parallel_map",
]


def parallel_map(fn, payloads, threads: int = 1):
    """Order-preserving map, optionally over a process pool."""
    payloads = list(payloads)
    if threads <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, payloads))


def avr(committees, profiles, axiom_set) -> float:
    """Mean violation flag over all (profile, axiom) pairs."""
    committees = [tuple(sorted(int(a) for a in c)) for c in committees]
    profiles = list(profiles)
    if len(committees) != len(profiles):
        raise ParameterError(
            f"got {len(committees)} committees for {len(profiles)} profiles"
        )
    if not committees:
        raise ParameterError("avr needs at least one (profile, committee) pair")
    axioms = tuple(AxiomId(a) for a in axiom_set)
    if not axioms:
        raise ParameterError("axiom set must be non-empty")
    k = len(committees[0])
    total = 0
    for committee, profile in zip(committees, profiles):
        if len(committee) != k:
            raise ParameterError("committees have mixed sizes")
        ctx = ElectionContext(profile, k)
        idx = ctx.committee_index(committee)
        total += int(ctx.violation_table(axioms)[idx].sum())
    return total / (len(axioms) * len(profiles))


def _shared_count(c1, c2, m: int, k: int) -> int:
    """Shared winners plus shared losers of two size-k committees."""
    return m - 2 * k + 2 * len(set(c1) & set(c2))


def rule_distance(committees1, committees2, m: int, k: int) -> float:
    """Normalized committee dissimilarity, delta = m / (m - |m - 2k|)."""
    committees1 = list(committees1)
    committees2 = list(committees2)
    if len(committees1) != len(committees2):
        raise ParameterError("committee sequences have different lengths")
    if not committees1:
        raise ParameterError("rule_distance needs at least one profile")
    for c in (*committees1, *committees2):
        members = set(int(a) for a in c)
        if len(members) != k or (members and (min(members) < 0 or max(members) >= m)):
            raise ParameterError(f"{tuple(c)} is not a size-{k} committee over {m} alternatives")
    delta = Fraction(m, m - abs(m - 2 * k))
    shared = sum(_shared_count(c1, c2, m, k) for c1, c2 in zip(committees1, committees2))
    value = delta - delta * Fraction(shared, m * len(committees1))
    assert 0 <= value <= 1
    return float(value)


def distance_matrix(rules, profiles, k: int, seed=0):
    """Pairwise rule distances on a common profile sequence.

    Returns (labels, matrix); the matrix is symmetric with a zero diagonal.
    Seeded rules draw a fresh derived seed per profile.
    """
    rules = [r if isinstance(r, RuleSpec) else RuleSpec(r) for r in rules]
    profiles = list(profiles)
    if not profiles:
        raise ParameterError("distance_matrix needs at least one profile")
    m = profiles[0].m
    committees = {r.label: [] for r in rules}
    for i, profile in enumerate(profiles):
        if profile.m != m:
            raise ParameterError("profiles have mixed m")
        for j, rule in enumerate(rules):
            call_seed = (int(seed), 101 + j, i) if rule.id in SEEDED_RULES else None
            committees[rule.label].append(elect(rule, profile, k, seed=call_seed))
    labels = [r.label for r in rules]
    matrix = np.zeros((len(rules), len(rules)))
    for a in range(len(rules)):
        for b in range(a + 1, len(rules)):
            d = rule_distance(committees[labels[a]], committees[labels[b]], m, k)
            matrix[a, b] = matrix[b, a] = d
    return labels, matrix


# ---------------------------------------------------------------------------
# sweep driver


@dataclass
class CellResult:
    """Violation counts for one (m, distribution, k) cell."""

    m: int
    dist: str
    k: int
    seed: int
    profiles: int
    axioms: tuple[str, ...]
    counts: dict[str, list[int]]          # method -> per-axiom violation counts
    shared_with_random: dict[str, int]    # method -> sum of shared winners+losers
    dominance_violations: int = 0

    def to_dict(self):
        return {
            "m": self.m,
            "dist": self.dist,
            "k": self.k,
            "seed": self.seed,
            "profiles": self.profiles,
            "axioms": list(self.axioms),
            "counts": self.counts,
            "shared_with_random": self.shared_with_random,
            "dominance_violations": self.dominance_violations,
        }


@dataclass
class EvaluationReport:
    """Aggregatable violation counts plus enough metadata to replay any cell."""

    n: int
    profiles_per_cell: int
    seed: int
    axioms: tuple[str, ...]
    methods: tuple[str, ...]
    cells: list[CellResult] = field(default_factory=list)

    def _cells(self, m=None, dist=None, k=None):
        out = [
            c
            for c in self.cells
            if (m is None or c.m == m) and (dist is None or c.dist == dist) and (k is None or c.k == k)
        ]
        if not out:
            raise ParameterError(f"no cells match m={m} dist={dist} k={k}")
        return out

    def violation_rate(self, method: str, axiom=None, m=None, dist=None, k=None) -> float:
        """Violation rate for one axiom, or the mean over all report axioms."""
        cells = self._cells(m, dist, k)
        profiles = sum(c.profiles for c in cells)
        if axiom is not None:
            idx = self.axioms.index(AxiomId(axiom).value)
            return sum(c.counts[method][idx] for c in cells) / profiles
        total = sum(sum(c.counts[method]) for c in cells)
        return total / (profiles * len(self.axioms))

    def mean_rate(self, method: str, m=None, dist=None, k=None) -> float:
        return self.violation_rate(method, None, m, dist, k)

    def random_distance(self, method: str, k: int, m=None, dist=None) -> float:
        """Distance between a method's committees and the random baseline at one k."""
        cells = self._cells(m, dist, k)
        mm = cells[0].m
        if any(c.m != mm for c in cells):
            raise ParameterError("random_distance needs a single m; pass m=")
        shared = sum(c.shared_with_random[method] for c in cells)
        profiles = sum(c.profiles for c in cells)
        delta = Fraction(mm, mm - abs(mm - 2 * k))
        value = delta - delta * Fraction(shared, mm * profiles)
        assert 0 <= value <= 1
        return float(value)

    def total_dominance_violations(self) -> int:
        return sum(c.dominance_violations for c in self.cells)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "profiles_per_cell": self.profiles_per_cell,
                "seed": self.seed,
                "axioms": list(self.axioms),
                "methods": list(self.methods),
                "cells": [c.to_dict() for c in self.cells],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "EvaluationReport":
        data = json.loads(text)
        cells = [
            CellResult(
                m=c["m"],
                dist=c["dist"],
                k=c["k"],
                seed=c["seed"],
                profiles=c["profiles"],
                axioms=tuple(c["axioms"]),
                counts={name: list(v) for name, v in c["counts"].items()},
                shared_with_random={name: int(v) for name, v in c["shared_with_random"].items()},
                dominance_violations=c["dominance_violations"],
            )
            for c in data["cells"]
        ]
        return cls(
            n=data["n"],
            profiles_per_cell=data["profiles_per_cell"],
            seed=data["seed"],
            axioms=tuple(data["axioms"]),
            methods=tuple(data["methods"]),
            cells=cells,
        )

    def rates_csv(self) -> str:
        """Rules-by-axioms rate matrix plus the mean column."""
        lines = ["method,mean," + ",".join(self.axioms)]
        for method in self.methods:
            rates = [self.violation_rate(method, a) for a in self.axioms]
            mean = self.mean_rate(method)
            lines.append(method + "," + ",".join(f"{r:.6f}" for r in [mean] + rates))
        return "\n".join(lines) + "\n"


def _sweep_cell(payload) -> CellResult:
    (rules, dist_label, spec, m, k, n, count, cell_seed, axiom_values, rename) = payload
    axioms = tuple(AxiomId(v) for v in axiom_values)
    rules = list(rules)
    names = [r.label for r in rules] + ["min", "max", "random"]
    counts = {name: np.zeros(len(axioms), dtype=np.int64) for name in names}
    shared = {name: 0 for name in names}
    dominance_violations = 0
    for i in range(count):
        profile = sample_profile(spec, n, m, child_seed(cell_seed, i))
        if rename:
            profile = rename_alternatives(profile, (cell_seed, 13, i))
        ctx = ElectionContext(profile, k)
        approvals = ctx.approvals
        table = ctx.violation_table(axioms)
        totals = table.sum(axis=1)
        min_idx = int(np.argmin(totals))
        max_idx = int(np.argmax(totals))
        rand = random_committee(m, k, (cell_seed, 7, i))
        rand_idx = ctx.committee_index(rand)
        rand_set = set(rand)
        counts["min"] += table[min_idx]
        counts["max"] += table[max_idx]
        counts["random"] += table[rand_idx]
        shared["min"] += _shared_count(ctx.committees[min_idx], rand_set, m, k)
        shared["max"] += _shared_count(ctx.committees[max_idx], rand_set, m, k)
        shared["random"] += m
        for j, rule in enumerate(rules):
            if rule.id in OPTIMIZING_RULES:
                # same code path as elect_optimizing, sharing the context's
                # overlap matrix and committee enumeration
                idx = _optimizing_best_index(
                    rule.id, ctx.overlap, ctx.committees, profile.position_array, k
                )
                committee = ctx.committees[idx]
            else:
                call_seed = (cell_seed, 101 + j, i) if rule.id in SEEDED_RULES else None
                committee = elect(rule, profile, k, seed=call_seed, approvals=approvals)
                idx = ctx.committee_index(committee)
            counts[rule.label] += table[idx]
            shared[rule.label] += _shared_count(committee, rand_set, m, k)
            if not totals[min_idx] <= totals[idx] <= totals[max_idx]:
                dominance_violations += 1
    return CellResult(
        m=m,
        dist=dist_label,
        k=k,
        seed=cell_seed,
        profiles=count,
        axioms=tuple(a.value for a in axioms),
        counts={name: c.tolist() for name, c in counts.items()},
        shared_with_random=shared,
        dominance_violations=dominance_violations,
    )


def avr_sweep(rules, distributions, m_list, k_list, n: int, profiles_per_cell: int, seed: int,
              axiom_set=ALL_AXIOMS, threads: int = 1, rename: bool = False) -> EvaluationReport:
    """Violation rates for every rule on every (m, distribution, k) cell,
    with exhaustive min/max rows and the uniform-random baseline.

    ``rename`` applies a seeded random relabeling of the alternatives to each
    sampled profile before any rule runs (all rules see the same relabeled
    profile). Structured distributions generate alternatives in a canonical
    order that lexicographic tie-breaking otherwise exploits.
    """
    rules = [r if isinstance(r, RuleSpec) else RuleSpec(r) for r in rules]
    distributions = [
        d if isinstance(d, DistributionSpec) else DistributionSpec.parse(d) for d in distributions
    ]
    axioms = tuple(AxiomId(a) for a in axiom_set)
    if not axioms:
        raise ParameterError("axiom set must be non-empty")
    if profiles_per_cell < 1:
        raise ParameterError("profiles_per_cell must be >= 1")
    m_list, k_list = list(m_list), list(k_list)
    cells = [
        (m, dist, k)
        for m in m_list
        for dist in distributions
        for k in k_list
        if 1 <= k < m
    ]
    if not cells:
        raise ParameterError("empty sweep grid")
    if len(cells) * profiles_per_cell > 20_000_000:
        raise CapacityError(f"sweep of {len(cells)} cells x {profiles_per_cell} profiles is too large")
    labels = [r.label for r in rules]
    if len(set(labels)) != len(labels):
        raise ParameterError("rule labels must be unique")
    payloads = [
        (tuple(rules), dist.label(), dist, m, k, n, profiles_per_cell,
         child_seed(seed, idx), tuple(a.value for a in axioms), rename)
        for idx, (m, dist, k) in enumerate(cells)
    ]
    results = parallel_map(_sweep_cell, payloads, threads)
    return EvaluationReport(
        n=n,
        profiles_per_cell=profiles_per_cell,
        seed=seed,
        axioms=tuple(a.value for a in axioms),
        methods=tuple(labels + ["min", "max", "random"]),
        cells=results,
    )
