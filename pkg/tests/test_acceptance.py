"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Scale: m = 7, n = 50, 2,000 profiles per (distribution, k) cell over all 17
distributions and k = 1..6. ACCEPT_SCALE (a float, default 1) shrinks the
profile counts for quick development runs; tolerances never change.
"""

import itertools
import os
from fractions import Fraction

import numpy as np
import pytest

from axiomvote.anneal import AnnealConfig, optimize_score_vector, positional_scoring_avr
from axiomvote.axioms import (
    ALL_AXIOMS,
    ROOT_AXIOMS,
    AxiomId,
    ElectionContext,
    implication_audit,
)
from axiomvote.fixtures import (
    FIXTURE_K,
    cohesive_overlap_profile,
    scattered_tops_profile,
    solid_pair_profile,
)
from axiomvote.metrics import avr_sweep, rule_distance
from axiomvote.prefs import (
    DistributionSpec,
    PreferenceProfile,
    derive_approvals,
    sample_profile,
    sample_profiles,
    standard_test_distributions,
)
from axiomvote.rules import RuleSpec, ScoreVector, random_committee
from axiomvote.search import min_violation_committee

from oracles import naive_violates

SCALE = float(os.environ.get("ACCEPT_SCALE", "1"))
PROFILES_PER_CELL = max(40, round(2000 * SCALE))
AUDIT_PROFILES = max(40, round(1000 * SCALE))
ANNEAL_TRAIN = max(100, round(2000 * SCALE))
ANNEAL_EVAL = max(100, round(2000 * SCALE))
ANNEAL_STEPS = max(50, round(1000 * min(1.0, SCALE * 2)))

SWEEP_SEED = 20250808

TABLE_RULES = [
    "borda", "eph", "sntv", "bloc", "stv", "pav", "mes",
    "cc", "seqcc", "lexcc", "monroe", "greedymonroe", "mav", "rsd",
]

# (rule, axiom) pairs whose violation rate must stay at zero up to
# tie-breaking noise: the satisfaction results marked as known in the
# summary table, plus STV's proportionality-for-solid-coalitions zero.
KNOWN_ZERO_PAIRS = [
    ("borda", AxiomId.STRONG_UNANIMITY),
    ("eph", AxiomId.STRONG_PARETO),
    ("sntv", AxiomId.MAJORITY_WINNER),
    ("sntv", AxiomId.SOLID_COALITIONS),
    ("bloc", AxiomId.STRONG_PARETO),
    ("bloc", AxiomId.FIXED_MAJORITY),
    ("bloc", AxiomId.STRONG_UNANIMITY),
    ("stv", AxiomId.MAJORITY_WINNER),
    ("stv", AxiomId.SOLID_COALITIONS),
    ("stv", AxiomId.DUMMETTS),
    ("pav", AxiomId.STRONG_PARETO),
    ("pav", AxiomId.JR),
    ("pav", AxiomId.EJR),
    ("mes", AxiomId.JR),
    ("mes", AxiomId.EJR),
    ("cc", AxiomId.JR),
    ("seqcc", AxiomId.JR),
    ("monroe", AxiomId.STRONG_UNANIMITY),
    ("monroe", AxiomId.JR),
    ("greedymonroe", AxiomId.STRONG_UNANIMITY),
    ("greedymonroe", AxiomId.JR),
]


def _line(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.fixture(scope="session")
def sweep():
    """All 14 rules over all 17 distributions at m=7, k=1..6.

    Profiles are relabeled after sampling, mirroring how the evaluation sets
    are produced; without it, lexicographic tie-breaking silently aligns with
    the structured distributions' canonical alternative order.
    """
    return avr_sweep(
        [RuleSpec(r) for r in TABLE_RULES],
        standard_test_distributions(),
        [7],
        [1, 2, 3, 4, 5, 6],
        n=50,
        profiles_per_cell=PROFILES_PER_CELL,
        seed=SWEEP_SEED,
        threads=int(os.environ.get("AXIOMVOTE_THREADS", "1")),
        rename=True,
    )


def test_known_satisfaction_zeros(sweep):
    rates = {
        (rule, axiom.value): sweep.violation_rate(rule, axiom)
        for rule, axiom in KNOWN_ZERO_PAIRS
    }
    worst = max(rates.values())
    ok = worst <= 0.001
    _line(
        "known-satisfaction zeros",
        ok,
        f"{len(rates)} shaded (rule, axiom) pairs, worst rate {worst:.6f} (limit 0.001)",
    )
    assert ok, {pair: rate for pair, rate in rates.items() if rate > 0.001}


def test_random_baseline_distance(sweep):
    exact = Fraction(0)
    for k in range(1, 7):
        delta = Fraction(7, 7 - abs(7 - 2 * k))
        exact += delta * (1 - Fraction(k * k + (7 - k) ** 2, 49))
    exact /= 6
    closed_form_ok = round(float(exact), 3) == 0.714

    offsets = {}
    for rule in TABLE_RULES:
        mean_d = sum(sweep.random_distance(rule, k, m=7) for k in range(1, 7)) / 6
        offsets[rule] = mean_d - 0.714
    worst_rule = max(offsets, key=lambda r: abs(offsets[r]))
    ok = closed_form_ok and all(abs(v) <= 0.02 for v in offsets.values())
    _line(
        "random-baseline distance",
        ok,
        f"closed form {float(exact):.6f}; worst rule {worst_rule} off by {offsets[worst_rule]:+.4f}"
        " (band +/-0.02)",
    )
    assert closed_form_ok
    assert ok, offsets


def test_oracle_dominance(sweep):
    pointwise = sweep.total_dominance_violations()
    lo = sweep.mean_rate("min")
    hi = sweep.mean_rate("max")
    rule_rates = {rule: sweep.mean_rate(rule) for rule in TABLE_RULES}
    ok = pointwise == 0 and all(lo <= rate <= hi for rate in rule_rates.values())
    _line(
        "oracle dominance",
        ok,
        f"0 pointwise exceptions expected, got {pointwise}; min {lo:.4f} <= rules <= max {hi:.4f}",
    )
    assert ok


def test_implication_audit_sampled():
    """Zero counterexamples claimed for the catalogued implication graph.

    Three of the thirteen audited edges (solid coalitions -> JR, local
    stability -> unanimity, local stability -> Condorcet loser) do not hold
    pointwise under the stated decision procedures, so this check reports
    them honestly and fails; see the audit edge counts in the message.
    """
    counts = {}
    pairs = 0
    for k in (2, 3):
        profiles = sample_profiles(DistributionSpec("mixed"), 50, 5, AUDIT_PROFILES, 600 + k)
        report = implication_audit(profiles, k)
        pairs += sum(report.pairs_checked.values())
        for edge, count in report.counts.items():
            counts[edge] = counts.get(edge, 0) + count
    total = sum(counts.values())
    bad_edges = {edge: count for edge, count in counts.items() if count}
    _line(
        "implication audit (sampled relations)",
        total == 0,
        f"{pairs} edge-pairs checked, {total} counterexamples on {sorted(bad_edges)}",
    )
    assert total == 0, bad_edges


def test_implication_audit_fixtures():
    pair = solid_pair_profile()
    ctx = ElectionContext(pair, FIXTURE_K)
    cw = ctx.axiom_column(AxiomId.CONDORCET_WINNER)
    dm = ctx.axiom_column(AxiomId.DUMMETTS)
    every_committee_conflicted = bool((cw | dm).all())
    _, min_count = min_violation_committee(
        pair, derive_approvals(pair, FIXTURE_K), FIXTURE_K,
        (AxiomId.CONDORCET_WINNER, AxiomId.DUMMETTS),
    )

    overlap = cohesive_overlap_profile()
    overlap_approvals = derive_approvals(overlap, FIXTURE_K)
    overlap_ctx = ElectionContext(overlap, FIXTURE_K, overlap_approvals)
    ejr_ok = overlap_ctx.violates(AxiomId.EJR, (3, 4, 5, 6, 7)) == 0
    dummetts_forced = overlap_ctx.violates(AxiomId.DUMMETTS, (3, 4, 5, 6, 7)) == 1

    scattered = scattered_tops_profile()
    scattered_ctx = ElectionContext(scattered, FIXTURE_K)
    dummetts_ok = scattered_ctx.violates(AxiomId.DUMMETTS, (5, 6, 7, 8, 9)) == 0
    ejr_broken = scattered_ctx.violates(AxiomId.EJR, (5, 6, 7, 8, 9)) == 1

    fm_ok = ctx.violates(AxiomId.FIXED_MAJORITY, (5, 6, 7, 8, 9)) == 0
    fm_vs_pair = ctx.violates(AxiomId.FIXED_MAJORITY, (0, 1, 7, 8, 9)) == 1
    dm_vs_majority = ctx.violates(AxiomId.DUMMETTS, (5, 6, 7, 8, 9)) == 1

    ok = all([
        every_committee_conflicted, min_count >= 1, ejr_ok, dummetts_forced,
        dummetts_ok, ejr_broken, fm_ok, fm_vs_pair, dm_vs_majority,
    ])
    _line(
        "implication audit (independence fixtures)",
        ok,
        "all documented fixture verdicts reproduced",
    )
    assert ok


def test_mean_avr_ordering(sweep):
    means = {rule: sweep.mean_rate(rule) for rule in TABLE_RULES}
    borda_ok = abs(means["borda"] - 0.021) <= 0.01
    cc_ok = abs(means["cc"] - 0.195) <= 0.05
    ordering_ok = all(
        means["borda"] < means[mid] < means[big]
        for mid in ("eph", "bloc", "pav")
        for big in ("cc", "seqcc")
    )
    ok = borda_ok and cc_ok and ordering_ok
    _line(
        "mean violation-rate ordering",
        ok,
        f"borda {means['borda']:.4f} (.021+/-.01), cc {means['cc']:.4f} (.195+/-.05), "
        f"eph {means['eph']:.4f}, bloc {means['bloc']:.4f}, pav {means['pav']:.4f}, "
        f"seqcc {means['seqcc']:.4f}",
    )
    assert ok, means


def test_annealed_vectors_beat_borda():
    from axiomvote.prefs import rename_alternatives

    results = {}
    ok = True
    for k in (1, 3, 6):
        profiles = sample_profiles(
            DistributionSpec("mixed"), 50, 7, ANNEAL_TRAIN + ANNEAL_EVAL, 71 + k
        )
        profiles = [rename_alternatives(p, (71 + k, 13, i)) for i, p in enumerate(profiles)]
        holdout = profiles[ANNEAL_TRAIN:]
        for name, axiom_set in (("all", ALL_AXIOMS), ("root", ROOT_AXIOMS)):
            config = AnnealConfig(
                m=7, k=k, axiom_set=axiom_set, steps=ANNEAL_STEPS,
                train_profiles=ANNEAL_TRAIN, seed=500 + k,
            )
            result = optimize_score_vector(config, profiles)
            borda_eval = positional_scoring_avr(ScoreVector.borda(7), holdout, k, axiom_set)
            scores = result.vector.scores
            shape_ok = (
                scores[0] == 1.0
                and scores[-1] == 0.0
                and all(a >= b for a, b in zip(scores, scores[1:]))
            )
            good = result.eval_avr <= borda_eval + 0.002 and shape_ok
            ok = ok and good
            results[(k, name)] = (result.eval_avr, borda_eval, good)
    detail = "; ".join(
        f"k={k} {name}: opt {opt:.4f} vs borda {borda:.4f}"
        for (k, name), (opt, borda, _) in sorted(results.items())
    )
    _line("annealed score vectors", ok, detail)
    assert ok, results


def test_metric_formula_checks():
    rng = np.random.default_rng(12)
    symmetric = True
    self_zero = True
    for _ in range(30):
        m = int(rng.integers(2, 9))
        k = int(rng.integers(1, m))
        cs1 = [tuple(sorted(rng.choice(m, k, replace=False).tolist())) for _ in range(5)]
        cs2 = [tuple(sorted(rng.choice(m, k, replace=False).tolist())) for _ in range(5)]
        symmetric &= rule_distance(cs1, cs2, m, k) == rule_distance(cs2, cs1, m, k)
        self_zero &= rule_distance(cs1, cs1, m, k) == 0.0
    delta_72 = Fraction(7, 7 - abs(7 - 2 * 2))
    delta_ok = delta_72 == Fraction(7, 4) and float(delta_72) == 1.75
    disjoint_one = rule_distance([(0, 1)], [(2, 3)], 4, 2) == 1.0
    ok = symmetric and self_zero and delta_ok and disjoint_one
    _line(
        "metric formulas",
        ok,
        "d(F,F)=0, symmetry, delta(7,2)=1.75, disjoint m=2k gives d=1 (all exact)",
    )
    assert ok


def test_double_implementation_oracle():
    mismatches = 0
    checked = 0
    # exhaustive: every 3-voter profile over 3 alternatives, all committees
    for rankings in itertools.product(itertools.permutations(range(3)), repeat=3):
        profile = PreferenceProfile(3, rankings)
        for k in (1, 2):
            ctx = ElectionContext(profile, k)
            table = ctx.violation_table(ALL_AXIOMS)
            for ci, committee in enumerate(ctx.committees):
                for ai, axiom in enumerate(ALL_AXIOMS):
                    checked += 1
                    if int(table[ci, ai]) != naive_violates(
                        axiom.value, rankings, 3, k, committee
                    ):
                        mismatches += 1
    exhaustive_checked = checked

    # random spot checks at experiment scale
    rng = np.random.default_rng(99)
    for i in range(1000):
        k = int(rng.integers(1, 7))
        profile = sample_profile(DistributionSpec("mixed"), 50, 7, (1234, i))
        committee = random_committee(7, k, (4321, i))
        ctx = ElectionContext(profile, k)
        axiom = ALL_AXIOMS[i % len(ALL_AXIOMS)]
        checked += 1
        if ctx.violates(axiom, committee) != naive_violates(
            axiom.value, profile.rankings, 7, k, committee
        ):
            mismatches += 1

    ok = mismatches == 0
    _line(
        "double-implementation oracle",
        ok,
        f"{exhaustive_checked} exhaustive + 1000 sampled checks, {mismatches} disagreements",
    )
    assert ok
