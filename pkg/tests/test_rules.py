import itertools

import numpy as np
import pytest

from axiomvote.errors import ParameterError
from axiomvote.prefs import DistributionSpec, PreferenceProfile, apply_relabeling, sample_profile
from axiomvote.rules import (
    RuleSpec,
    ScoreVector,
    canonical_committee,
    elect,
    elect_optimizing,
    elect_rsd,
    elect_scoring,
    elect_sequential,
    elect_stv,
    random_committee,
    tie_break,
)

import oracles

# 3 voters over {a=0, b=1, c=2}: a>b>c, a>c>b, b>a>c
P1 = PreferenceProfile(3, ((0, 1, 2), (0, 2, 1), (1, 0, 2)))

# m=4, k=2; top-2 approvals are 3x{a,b} and 1x{c,d}
P2 = PreferenceProfile(4, ((0, 1, 2, 3),) * 3 + ((2, 3, 0, 1),))


def test_borda_hand_scores():
    # scores a=5, b=3, c=1
    assert elect_scoring("borda", P1, 2) == (0, 1)


def test_sntv_hand_counts():
    # first-place counts a=2, b=1, c=0
    assert elect_scoring("sntv", P1, 1) == (0,)


def test_bloc_hand_counts():
    # approval counts a=3, b=2, c=1
    assert elect_scoring("bloc", P1, 2) == (0, 1)


def test_positional_borda_vector_matches_borda():
    for seed in range(25):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(3, 8))
        n = int(rng.integers(1, 30))
        profile = sample_profile(DistributionSpec("mixed"), n, m, seed)
        spec = RuleSpec("positionalscoring", score_vector=ScoreVector.borda(m))
        for k in range(1, m):
            assert elect_scoring(spec, profile, k) == elect_scoring("borda", profile, k)


def test_stv_elimination_trace():
    # quota 5; tallies 4/3/3; c removed on the elimination tie, b reaches 6
    profile = PreferenceProfile(3, ((0, 1, 2),) * 4 + ((1, 2, 0),) * 3 + ((2, 1, 0),) * 3)
    assert elect_stv(profile, 1) == (1,)


def test_stv_surplus_transfer_trace():
    # quota 2; a seated on 6 votes, weights scale to 2/3 each, b reaches 4
    profile = PreferenceProfile(3, ((0, 1, 2),) * 6)
    assert elect_stv(profile, 2) == (0, 1)


def test_stv_identity_elects_common_top():
    for m, k in ((4, 2), (5, 3), (6, 5)):
        profile = sample_profile(DistributionSpec("identity"), 9, m, 0)
        assert elect_stv(profile, k) == tuple(range(k))


def test_pav_hand_trace():
    # {a,b} scores 3 * 1.5 = 4.5, beating {a,c} at 4
    assert elect_optimizing("pav", P2, 2) == (0, 1)


def test_cc_hand_trace():
    # {a,c} covers all four voters and is lex-least among full coverage
    assert elect_optimizing("cc", P2, 2) == (0, 2)


def test_mav_exact_match():
    profile = PreferenceProfile(4, ((0, 1, 2, 3),))
    assert elect_optimizing("mav", profile, 2) == (0, 1)


def test_monroe_k1_is_borda_winner():
    for seed in range(15):
        rng = np.random.default_rng(seed)
        n, m = int(rng.integers(1, 9)), int(rng.integers(3, 7))
        profile = sample_profile(DistributionSpec("mixed"), n, m, seed + 40)
        assert elect_optimizing("monroe", profile, 1) == elect_scoring("borda", profile, 1)


def test_seqcc_greedy_trace():
    # a covers 3 first, then c and d tie on marginal coverage; c wins
    assert elect_sequential("seqcc", P2, 2) == (0, 2)


def test_mes_hand_trace():
    # budgets 1/2 each; a costs 1/4 per voter; b and c are unaffordable, and
    # the continuation breaks their tie toward b
    profile = PreferenceProfile(3, ((0, 1, 2), (0, 1, 2), (0, 2, 1), (0, 2, 1)))
    assert elect_sequential("mes", profile, 2) == (0, 1)


def test_eph_unanimous_approvals():
    profile = PreferenceProfile(5, ((2, 4, 0, 1, 3),) * 3)
    assert elect_sequential("eph", profile, 2) == (2, 4)


def test_rsd_identity_and_single_voter():
    identity = sample_profile(DistributionSpec("identity"), 8, 5, 0)
    for seed in range(10):
        assert elect_rsd(identity, 3, seed) == (0, 1, 2)
    single = PreferenceProfile(4, ((3, 0, 2, 1),))
    assert elect_rsd(single, 2, 123) == (0, 3)
    assert elect_rsd(identity, 2, 5) == elect_rsd(identity, 2, 5)


def test_random_committee_uniform():
    counts = {(0,): 0, (1,): 0}
    for seed in range(10000):
        counts[random_committee(2, 1, seed)] += 1
    assert abs(counts[(0,)] - 5000) < 200
    assert random_committee(3, 2, 5) == random_committee(3, 2, 5)
    assert random_committee(3, 2, 7) in [(0, 1), (0, 2), (1, 2)]


def test_tie_break():
    assert tie_break([(0, 2), (0, 1)]) == (0, 1)
    assert tie_break([(1, 2)]) == (1, 2)
    assert tie_break([{1, 2}, {0, 3}]) == (0, 3)
    with pytest.raises(ParameterError):
        tie_break([])


def test_score_vector_validation():
    ScoreVector((1.0, 0.5, 0.0))
    with pytest.raises(ParameterError):
        ScoreVector((1.0, 0.2, 0.5, 0.0))
    with pytest.raises(ParameterError):
        ScoreVector((0.9, 0.0))
    with pytest.raises(ParameterError):
        ScoreVector((1.0, 0.1))
    assert ScoreVector.borda(5).scores == (1.0, 0.75, 0.5, 0.25, 0.0)


def test_rule_spec_validation():
    with pytest.raises(ParameterError):
        RuleSpec("nope")
    with pytest.raises(ParameterError):
        RuleSpec("positionalscoring")
    with pytest.raises(ParameterError):
        RuleSpec("borda", seed=1)
    with pytest.raises(ParameterError):
        elect("rsd", P1, 1)  # needs a seed
    with pytest.raises(ParameterError):
        elect_scoring("borda", P1, 3)


def test_bloc_k_m_minus_1_excludes_least_approved():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(3, 8))
        profile = sample_profile(DistributionSpec("mixed"), 15, m, seed + 90)
        k = m - 1
        committee = elect_scoring("bloc", profile, k)
        counts = (profile.position_array < k).sum(axis=0)
        (excluded,) = set(range(m)) - set(committee)
        assert counts[excluded] == counts.min()


def test_optimizing_rules_match_brute_force():
    for seed in range(30):
        rng = np.random.default_rng(seed)
        n, m = int(rng.integers(2, 7)), int(rng.integers(3, 6))
        k = int(rng.integers(1, m))
        profile = sample_profile(DistributionSpec("mixed"), n, m, seed + 300)
        r = profile.rankings
        scorers = {
            "pav": lambda c: oracles.pav_score(r, k, c),
            "cc": lambda c: oracles.cc_score(r, k, c),
            "mav": lambda c: oracles.mav_score(r, k, c),
            "lexcc": lambda c: oracles.lexcc_score(r, k, c),
            "monroe": lambda c: oracles.monroe_score(r, m, k, c),
        }
        for rule, scorer in scorers.items():
            expected, _ = oracles.best_committee(m, k, scorer)
            assert elect_optimizing(rule, profile, k) == expected, (rule, seed)


def test_lexcc_attains_max_coverage():
    for seed in range(20):
        profile = sample_profile(DistributionSpec("mixed"), 12, 5, seed + 60)
        for k in (1, 2, 3):
            committee = elect_optimizing("lexcc", profile, k)
            r = profile.rankings
            best_cov = max(
                oracles.cc_score(r, k, c) for c in itertools.combinations(range(5), k)
            )
            assert oracles.cc_score(r, k, committee) == best_cov


def test_scoring_rules_neutral_under_renaming():
    rng = np.random.default_rng(4)
    checked = 0
    for seed in range(40):
        m = int(rng.integers(3, 7))
        profile = sample_profile(DistributionSpec("mixed"), 11, m, seed + 700)
        perm = tuple(int(x) for x in rng.permutation(m))
        renamed = apply_relabeling(profile, perm)
        pos = profile.position_array
        for rule in ("borda", "sntv", "bloc"):
            for k in (1, m - 1):
                if rule == "borda":
                    scores = (m - 1) * profile.n - pos.sum(axis=0)
                elif rule == "sntv":
                    scores = np.bincount(profile.ranking_array[:, 0], minlength=m)
                else:
                    scores = (pos < k).sum(axis=0)
                if len(set(scores.tolist())) < m:
                    continue  # a tie somewhere; renaming equivariance not guaranteed
                original = elect(rule, profile, k)
                image = canonical_committee(perm[a] for a in original)
                assert elect(rule, renamed, k) == image
                checked += 1
    assert checked > 30


def test_resoluteness_and_canonical_form():
    rules = ["borda", "sntv", "stv", "bloc", "pav", "cc", "lexcc", "seqcc",
             "monroe", "greedymonroe", "mav", "mes", "eph"]
    for seed in range(6):
        profile = sample_profile(DistributionSpec("mixed"), 10, 6, seed + 20)
        for k in (1, 3, 5):
            for rule in rules:
                committee = elect(rule, profile, k)
                assert committee == tuple(sorted(set(committee)))
                assert len(committee) == k
                assert all(0 <= a < 6 for a in committee)
