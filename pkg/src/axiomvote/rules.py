"""Multi-winner voting rules, each resolute under lexicographic tie-breaking.

Committees are canonical tuples of strictly ascending alternative indices.
Alternative-level score ties break toward the lower index; committee-level
ties break toward the lexicographically least canonical tuple. Exhaustive
rules scan all C(m, k) committees; weight-transfer rules use exact rational
arithmetic so traces are reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ParameterError
from .prefs import ApprovalProfile, PreferenceProfile, derive_approvals

__all__ = [
    "Committee",
    "RuleSpec",
    "ScoreVector",
    "RULE_IDS",
    "canonical_committee",
    "tie_break",
    "elect",
    "elect_scoring",
    "elect_stv",
    "elect_optimizing",
    "elect_sequential",
    "elect_rsd",
    "random_committee",
]

Committee = tuple[int, ...]

RULE_IDS = (
    "borda",
    "sntv",
    "stv",
    "bloc",
    "pav",
    "cc",
    "lexcc",
    "seqcc",
    "monroe",
    "greedymonroe",
    "mav",
    "mes",
    "eph",
    "rsd",
    "randomcommittee",
    "positionalscoring",
)

SCORING_RULES = frozenset({"borda", "sntv", "bloc", "positionalscoring"})
OPTIMIZING_RULES = frozenset({"pav", "cc", "lexcc", "mav", "monroe"})
SEQUENTIAL_RULES = frozenset({"seqcc", "greedymonroe", "mes", "eph"})
SEEDED_RULES = frozenset({"rsd", "randomcommittee"})


@dataclass(frozen=True)
class ScoreVector:
    """Non-increasing positional scores with scores[0] == 1 and scores[-1] == 0.

    Entries may be floats or exact rationals; rationals make mathematically
    tied totals compare equal, so index tie-breaking matches the unscaled
    rule (``borda()`` relies on this).
    """

    scores: tuple

    def __post_init__(self):
        object.__setattr__(self, "scores", tuple(self.scores))
        s = self.scores
        if len(s) < 2:
            raise ParameterError("a score vector needs at least two entries")
        if s[0] != 1 or s[-1] != 0:
            raise ParameterError(f"score vector endpoints must be 1 and 0, got {s[0]} and {s[-1]}")
        if any(a < b for a, b in zip(s, s[1:])):
            raise ParameterError(f"score vector must be non-increasing: {s}")

    @property
    def m(self) -> int:
        return len(self.scores)

    @classmethod
    def borda(cls, m: int) -> "ScoreVector":
        return cls(tuple(Fraction(m - 1 - i, m - 1) for i in range(m)))


@dataclass(frozen=True)
class RuleSpec:
    """A rule identifier plus whatever parameters the rule requires."""

    id: str
    score_vector: ScoreVector | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.id not in RULE_IDS:
            raise ParameterError(f"unknown rule id {self.id!r}")
        if self.id == "positionalscoring" and self.score_vector is None:
            raise ParameterError("positionalscoring requires a score vector")
        if self.id != "positionalscoring" and self.score_vector is not None:
            raise ParameterError(f"{self.id} takes no score vector")
        if self.seed is not None and self.id not in SEEDED_RULES:
            raise ParameterError(f"{self.id} takes no seed")

    @property
    def label(self) -> str:
        return self.id


def canonical_committee(members, m: int | None = None, k: int | None = None) -> Committee:
    """Sort and validate a committee."""
    committee = tuple(sorted(int(a) for a in members))
    if len(set(committee)) != len(committee):
        raise ParameterError(f"committee has repeated members: {members}")
    if k is not None and len(committee) != k:
        raise ParameterError(f"committee {committee} has size {len(committee)}, expected {k}")
    if committee and (committee[0] < 0 or (m is not None and committee[-1] >= m)):
        raise ParameterError(f"committee {committee} out of range 0..{m - 1}")
    return committee


def tie_break(candidates) -> Committee:
    """Lexicographically least committee among the candidates."""
    committees = [tuple(sorted(int(a) for a in c)) for c in candidates]
    if not committees:
        raise ParameterError("tie_break requires a non-empty set of committees")
    return min(committees)


def _check_k(profile: PreferenceProfile, k: int):
    if not 1 <= k < profile.m:
        raise ParameterError(f"k must satisfy 1 <= k < m, got k={k}, m={profile.m}")


def _checked_approvals(profile: PreferenceProfile, k: int,
                       approvals: ApprovalProfile | None) -> ApprovalProfile:
    """Derive top-k approvals, or validate caller-supplied ones."""
    if approvals is None:
        return derive_approvals(profile, k)
    if approvals.m != profile.m or approvals.n != profile.n or approvals.k != k:
        raise ParameterError("approval profile does not match the election (m, n, k)")
    return approvals


def _top_k_lowest_index(scores, k: int) -> Committee:
    """k highest scorers; ties go to the lower alternative index."""
    scores = np.asarray(scores)
    order = np.lexsort((np.arange(len(scores)), -scores))
    return tuple(sorted(int(a) for a in order[:k]))


# ---------------------------------------------------------------------------
# positional scoring rules


def elect_scoring(rule: RuleSpec | str, profile: PreferenceProfile, k: int) -> Committee:
    spec = rule if isinstance(rule, RuleSpec) else RuleSpec(rule)
    _check_k(profile, k)
    pos = profile.position_array
    n, m = pos.shape
    if spec.id == "borda":
        scores = (m - 1) * n - pos.sum(axis=0)
    elif spec.id == "sntv":
        scores = np.bincount(profile.ranking_array[:, 0], minlength=m)
    elif spec.id == "bloc":
        scores = (pos < k).sum(axis=0)
    elif spec.id == "positionalscoring":
        vec = spec.score_vector
        if vec.m != m:
            raise ParameterError(f"score vector has length {vec.m}, profile has m={m}")
        counts = np.zeros((m, m), dtype=np.int64)
        np.add.at(counts, (profile.ranking_array, np.tile(np.arange(m), (n, 1))), 1)
        # plain Python sums so exact (Fraction) vector entries stay exact
        totals = [sum(int(counts[a, j]) * vec.scores[j] for j in range(m)) for a in range(m)]
        order = sorted(range(m), key=lambda a: (totals[a], -a), reverse=True)
        return tuple(sorted(order[:k]))
    else:
        raise ParameterError(f"{spec.id} is not a positional scoring rule")
    return _top_k_lowest_index(scores, k)


# ---------------------------------------------------------------------------
# single transferable vote


def elect_stv(profile: PreferenceProfile, k: int) -> Committee:
    """Fractional-transfer STV with quota n/(k+1).

    A candidate is seated once its weighted first-place support strictly
    exceeds the quota; supporters' weights are scaled by (total - quota)/total.
    With no candidate above quota, the candidate with the lowest support is
    removed (ties remove the highest index). Weights are exact rationals.
    """
    _check_k(profile, k)
    n, m = profile.n, profile.m
    quota = Fraction(n, k + 1)
    weights = [Fraction(1)] * n
    pointer = [0] * n
    rankings = profile.rankings
    standing = set(range(m))
    elected: list[int] = []
    while len(elected) < k:
        if len(standing) <= k - len(elected):
            elected.extend(sorted(standing))
            break
        tallies = {a: Fraction(0) for a in standing}
        supporters: dict[int, list[int]] = {a: [] for a in standing}
        for v in range(n):
            while rankings[v][pointer[v]] not in standing:
                pointer[v] += 1
            top = rankings[v][pointer[v]]
            tallies[top] += weights[v]
            supporters[top].append(v)
        best = min(standing, key=lambda a: (-tallies[a], a))
        if tallies[best] > quota:
            elected.append(best)
            standing.remove(best)
            scale = (tallies[best] - quota) / tallies[best]
            for v in supporters[best]:
                weights[v] *= scale
        else:
            worst = min(standing, key=lambda a: (tallies[a], -a))
            standing.remove(worst)
    return tuple(sorted(elected))


# ---------------------------------------------------------------------------
# exhaustive optimization rules


def _committee_enumeration(m: int, k: int):
    return itertools.combinations(range(m), k)


def _overlap_matrix(approvals: ApprovalProfile, committees) -> np.ndarray:
    """(n, n_committees) per-voter approved-member counts."""
    mask = np.zeros((len(committees), approvals.m), dtype=np.int64)
    for i, committee in enumerate(committees):
        mask[i, list(committee)] = 1
    return approvals.matrix.astype(np.int64) @ mask.T


def _monroe_committee_score(pos: np.ndarray, members: Committee) -> int:
    """Total Borda score of the best balanced voter assignment to the members.

    Solved as a square assignment problem: each member contributes
    floor(n/k) mandatory voter slots plus, when n % k > 0, one optional slot
    contested between real voters and zero-cost dummies.
    """
    n, m = pos.shape
    k = len(members)
    base, extra = divmod(n, k)
    cost = pos[:, list(members)]
    base_cols = np.repeat(cost, base, axis=1) if base else np.empty((n, 0), dtype=np.int64)
    if extra:
        real = np.hstack([base_cols, cost])
        big = n * m + 1
        dummy = np.full((k - extra, real.shape[1]), big, dtype=np.int64)
        dummy[:, k * base:] = 0
        matrix = np.vstack([real, dummy])
    else:
        matrix = base_cols
    row_ind, col_ind = linear_sum_assignment(matrix)
    assignment_cost = int(matrix[row_ind, col_ind].sum())
    # dummies sit on zero-cost optional slots, so they add nothing
    return n * (m - 1) - assignment_cost


def _pav_harmonic_int(k: int) -> np.ndarray:
    """PAV satisfaction scores scaled by lcm(1..k) so sums stay integral."""
    scale = math.lcm(*range(1, k + 1))
    return np.concatenate([[0], np.cumsum([scale // j for j in range(1, k + 1)])]).astype(np.int64)


def _optimizing_best_index(rule_id: str, overlap: np.ndarray, committees, pos: np.ndarray,
                           k: int) -> int:
    """Index of the winning committee in the lexicographic enumeration.

    ``overlap`` is the (n, n_committees) per-voter approved-member count
    matrix for the same enumeration; argmax picks its first (lex-least)
    optimum.
    """
    if rule_id == "pav":
        return int(np.argmax(_pav_harmonic_int(k)[overlap].sum(axis=0)))
    if rule_id == "cc":
        return int(np.argmax((overlap > 0).sum(axis=0)))
    if rule_id == "mav":
        # minimal max Hamming distance == maximal min overlap
        return int(np.argmax(overlap.min(axis=0)))
    if rule_id == "lexcc":
        coverage = np.stack([(overlap >= j).sum(axis=0) for j in range(1, k + 1)])
        best = 0
        for i in range(1, len(committees)):
            if tuple(coverage[:, i]) > tuple(coverage[:, best]):
                best = i
        return best
    if rule_id == "monroe":
        n, m = pos.shape
        best_idx, best_score = 0, None
        # unconstrained upper bound prunes committees that cannot beat the incumbent
        borda = m - 1 - pos
        bounds = [int(borda[:, list(c)].max(axis=1).sum()) for c in committees]
        for i, committee in enumerate(committees):
            if best_score is not None and bounds[i] <= best_score:
                continue
            score = _monroe_committee_score(pos, committee)
            if best_score is None or score > best_score:
                best_idx, best_score = i, score
        return best_idx
    raise ParameterError(f"{rule_id} is not an optimization rule")


def elect_optimizing(rule: RuleSpec | str, profile: PreferenceProfile, k: int,
                     approvals: ApprovalProfile | None = None) -> Committee:
    """Exhaustive scan over all C(m, k) committees for the score-optimal one."""
    spec = rule if isinstance(rule, RuleSpec) else RuleSpec(rule)
    _check_k(profile, k)
    if spec.id not in OPTIMIZING_RULES:
        raise ParameterError(f"{spec.id} is not an optimization rule")
    approvals = _checked_approvals(profile, k, approvals)
    committees = list(_committee_enumeration(profile.m, k))
    overlap = _overlap_matrix(approvals, committees)
    index = _optimizing_best_index(spec.id, overlap, committees, profile.position_array, k)
    return committees[index]


# ---------------------------------------------------------------------------
# sequential rules


def _elect_seqcc(profile: PreferenceProfile, k: int, approvals: ApprovalProfile) -> Committee:
    mat = approvals.matrix
    covered = np.zeros(profile.n, dtype=bool)
    chosen: list[int] = []
    for _ in range(k):
        gains = (mat[:, :] & ~covered[:, None]).sum(axis=0)
        gains[chosen] = -1
        pick = int(np.argmax(gains))  # argmax takes the lowest index on ties
        chosen.append(pick)
        covered |= mat[:, pick]
    return tuple(sorted(chosen))


def _elect_greedy_monroe(profile: PreferenceProfile, k: int) -> Committee:
    """Each round grabs the (alternative, voter block) pair with the highest
    summed Borda score and retires the block; block sizes are ceil(n/k) for
    the first n % k rounds, floor(n/k) afterwards."""
    n, m = profile.n, profile.m
    borda = m - 1 - profile.position_array
    remaining = np.arange(n)
    chosen: list[int] = []
    base, extra = divmod(n, k)
    for round_idx in range(k):
        size = min(base + (1 if round_idx < extra else 0), len(remaining))
        scores = borda[remaining]
        if size == 0 or len(remaining) == 0:
            pool = [a for a in range(m) if a not in chosen]
            chosen.append(pool[0])
            continue
        sums = -np.partition(-scores, size - 1, axis=0)[:size].sum(axis=0)
        sums[chosen] = -1
        pick = int(np.argmax(sums))
        chosen.append(pick)
        # retire the supporters: highest scores first, voter index breaks ties
        order = np.lexsort((remaining, -scores[:, pick]))
        remaining = np.delete(remaining, order[:size])
    return tuple(sorted(chosen))


def _sequential_phragmen(approvals: ApprovalProfile, need: int, elected: list[int], loads: list[Fraction]):
    """Fill the remaining seats by continuous load balancing."""
    n, m = approvals.n, approvals.m
    supporters = [[v for v in range(n) if a in approvals.approvals[v]] for a in range(m)]
    while need > 0:
        best, best_load = None, None
        for a in range(m):
            if a in elected or not supporters[a]:
                continue
            load = (1 + sum(loads[v] for v in supporters[a])) / len(supporters[a])
            if best_load is None or load < best_load:
                best, best_load = a, load
        if best is None:
            # nobody approves the leftovers; fill with the lowest indices
            leftovers = [a for a in range(m) if a not in elected]
            elected.extend(leftovers[:need])
            return
        elected.append(best)
        for v in supporters[best]:
            loads[v] = best_load
        need -= 1


def _elect_mes(profile: PreferenceProfile, k: int, approvals: ApprovalProfile) -> Committee:
    """Method of Equal Shares with a sequential-Phragmen second phase.

    Phase 1: every voter holds budget k/n and a candidate costs 1; each round
    elects the affordable candidate minimizing the uniform per-voter payment
    cap, ties to the lower index. Phase 2 continues with voter loads equal to
    the amounts paid in phase 1.

    Budgets are integer numerators over one shared denominator, so all
    arithmetic is exact; the denominator absorbs a factor of the payer count
    whenever a round's cap splits unevenly.
    """
    n = profile.n
    denom = n  # budget of v is nums[v] / denom
    nums = [k] * n
    paid = [0] * n
    supporters = [[v for v in range(n) if a in approvals.approvals[v]] for a in range(profile.m)]
    elected: list[int] = []
    while len(elected) < k:
        best, best_cap, best_split = None, None, None
        for a in range(profile.m):
            if a in elected or not supporters[a]:
                continue
            ordered = sorted(nums[v] for v in supporters[a])
            if sum(ordered) < denom:
                continue
            remaining = denom  # the candidate's unit cost in 1/denom units
            for i, b in enumerate(ordered):
                payers = len(ordered) - i
                if remaining <= b * payers:
                    cap = Fraction(remaining, payers * denom)
                    if best_cap is None or cap < best_cap:
                        best, best_cap, best_split = a, cap, (remaining, payers)
                    break
                remaining -= b
        if best is None:
            break
        elected.append(best)
        remaining, payers = best_split
        if remaining % payers:
            nums = [x * payers for x in nums]
            paid = [x * payers for x in paid]
            denom *= payers
            cap_num = remaining  # == old remaining * payers / payers
        else:
            cap_num = remaining // payers
        for v in supporters[best]:
            payment = min(cap_num, nums[v])
            nums[v] -= payment
            paid[v] += payment
    if len(elected) < k:
        loads = [Fraction(x, denom) for x in paid]
        _sequential_phragmen(approvals, k - len(elected), elected, loads)
    return tuple(sorted(elected))


def _elect_eph(profile: PreferenceProfile, k: int, approvals: ApprovalProfile) -> Committee:
    """Single divisible vote with least-popular elimination.

    Each round every voter splits one point evenly over their remaining
    approved alternatives (scaled by lcm(1..m) to stay integral); of the two
    lowest-point alternatives, the one with fewer overall approvals is
    eliminated, equal approvals eliminating the higher index.
    """
    n, m = profile.n, profile.m
    approval_count = approvals.matrix.sum(axis=0)
    scale = math.lcm(*range(1, m + 1))
    remaining = set(range(m))
    voter_sets = [set(s) for s in approvals.approvals]
    while len(remaining) > k:
        points = {a: 0 for a in remaining}
        for live in voter_sets:
            active = live & remaining
            if not active:
                continue
            share = scale // len(active)
            for a in active:
                points[a] += share
        order = sorted(remaining, key=lambda a: (points[a], approval_count[a], a))
        x, y = order[0], order[1]
        if approval_count[x] != approval_count[y]:
            out = x if approval_count[x] < approval_count[y] else y
        else:
            out = max(x, y)
        remaining.remove(out)
    return tuple(sorted(remaining))


def elect_sequential(rule: RuleSpec | str, profile: PreferenceProfile, k: int,
                     approvals: ApprovalProfile | None = None) -> Committee:
    spec = rule if isinstance(rule, RuleSpec) else RuleSpec(rule)
    _check_k(profile, k)
    if spec.id == "greedymonroe":
        return _elect_greedy_monroe(profile, k)
    approvals = _checked_approvals(profile, k, approvals)
    if spec.id == "seqcc":
        return _elect_seqcc(profile, k, approvals)
    if spec.id == "mes":
        return _elect_mes(profile, k, approvals)
    if spec.id == "eph":
        return _elect_eph(profile, k, approvals)
    raise ParameterError(f"{spec.id} is not a sequential rule")


# ---------------------------------------------------------------------------
# seeded rules


def elect_rsd(profile: PreferenceProfile, k: int, seed) -> Committee:
    """A uniformly drawn dictator's top-k."""
    _check_k(profile, k)
    rng = np.random.default_rng(seed)
    dictator = int(rng.integers(profile.n))
    return tuple(sorted(profile.rankings[dictator][:k]))


def random_committee(m: int, k: int, seed) -> Committee:
    """Uniform over all C(m, k) committees."""
    if not 1 <= k < m:
        raise ParameterError(f"k must satisfy 1 <= k < m, got k={k}, m={m}")
    rng = np.random.default_rng(seed)
    return tuple(sorted(int(a) for a in rng.choice(m, size=k, replace=False)))


# ---------------------------------------------------------------------------
# dispatch


def elect(rule: RuleSpec | str, profile: PreferenceProfile, k: int, seed=None,
          approvals: ApprovalProfile | None = None) -> Committee:
    """Run any rule by its spec; seeded rules take the call-site seed first."""
    spec = rule if isinstance(rule, RuleSpec) else RuleSpec(rule)
    if spec.id in SCORING_RULES:
        return elect_scoring(spec, profile, k)
    if spec.id == "stv":
        return elect_stv(profile, k)
    if spec.id in OPTIMIZING_RULES:
        return elect_optimizing(spec, profile, k, approvals)
    if spec.id in SEQUENTIAL_RULES:
        return elect_sequential(spec, profile, k, approvals)
    effective_seed = seed if seed is not None else spec.seed
    if effective_seed is None:
        raise ParameterError(f"{spec.id} requires a seed")
    if spec.id == "rsd":
        return elect_rsd(profile, k, effective_seed)
    if spec.id == "randomcommittee":
        return random_committee(profile.m, k, effective_seed)
    raise ParameterError(f"unknown rule id {spec.id!r}")
