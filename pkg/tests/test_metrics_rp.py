from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import log_from, random_log
from temporal_fairness.log import GapProfile, make_pa_log
from temporal_fairness.metrics import (
    PriorityVector,
    RpVariant,
    RpWeights,
    awe_legacy,
    gap_ratio,
    rotational_score,
    rp_family,
    rp_per_agent,
    rp_system,
    waiting_periods_eval,
    weighted_rp_system,
)
from temporal_fairness.metrics.rp import per_agent_rp


def profile(wins, periods=1):
    gaps = tuple(b - a - 1 for a, b in zip(wins, wins[1:]))
    return GapProfile(0, tuple(wins), gaps, periods)


class TestRotationalScore:
    @pytest.mark.parametrize(
        "mean,ideal,expected",
        [(1, 2, 0.5), (4, 2, 0.5), (0, 2, 0.0), (2, 2, 1.0), (3, 1, 1 / 3)],
    )
    def test_examples(self, mean, ideal, expected):
        assert gap_ratio(mean, ideal) == pytest.approx(expected, abs=1e-15)

    def test_fewer_than_two_wins(self):
        assert rotational_score(profile([]), 2) == 0.0
        assert rotational_score(profile([4]), 2) == 0.0

    def test_from_profile(self):
        assert rotational_score(profile([0, 2, 4]), 1) == 1.0
        assert rotational_score(profile([0, 1, 2]), 1) == 0.0

    def test_invalid_ideal(self):
        with pytest.raises(ValueError):
            gap_ratio(1, 0)

    @given(st.fractions(0, 50), st.fractions(Fraction(1, 100), 50))
    def test_symmetric_in_ratio(self, mean, ideal):
        if mean == 0:
            return
        assert gap_ratio(mean, ideal) == gap_ratio(ideal * ideal / mean, ideal)

    @given(st.fractions(Fraction(1, 100), 50), st.fractions(Fraction(1, 100), 5))
    def test_monotone_towards_ideal(self, ideal, step):
        below = [ideal - k * step for k in range(3) if ideal - k * step > 0]
        scores = [gap_ratio(m, ideal) for m in below]
        assert scores == sorted(scores, reverse=True)

    def test_no_collapse_far_from_ideal(self):
        # unlike the legacy score, a gap 3x the ideal still earns credit
        assert gap_ratio(6, 2) > 0
        assert awe_legacy(profile([0, 7, 14]), 2) == 0.0


class TestWaitingPeriods:
    @pytest.mark.parametrize("t,t_star,expected", [(4, 4, 1.0), (2, 4, 0.5), (6, 4, 0.5), (8, 4, 0.0), (20, 4, 0.0)])
    def test_examples(self, t, t_star, expected):
        assert waiting_periods_eval(t, t_star) == expected

    def test_fractional_target(self):
        assert waiting_periods_eval(3, Fraction(10, 3)) == pytest.approx(0.9)


class TestLegacy:
    def test_examples(self):
        assert awe_legacy(profile([0, 2, 4]), 1) == 1.0
        assert awe_legacy(profile([0, 3, 6]), 2) == 1.0
        assert awe_legacy(profile([0, 2, 4]), 2) == 0.5
        assert awe_legacy(profile([0]), 2) == 0.0


def test_rp_per_agent():
    assert rp_per_agent(1.0, 0.5) == 0.75
    assert rp_per_agent(1.0, 0.5, RpWeights(3, 2)) == pytest.approx(0.8)
    assert rp_per_agent(0.5, 1.0, RpWeights(2, 3)) == pytest.approx(0.8)
    assert rp_per_agent(0.4, 1.0, RpWeights(1, 1)) == pytest.approx(0.7)


def test_weights_validation():
    with pytest.raises(ValueError):
        RpWeights(0, 0)
    with pytest.raises(ValueError):
        RpWeights(-1, 2)


def test_agent_that_never_wins():
    log = log_from(3, [[0], [1]] * 6)
    per = per_agent_rp(log)
    # agent 2: no gaps so RS = 0, one waiting period against a target of 4
    assert per[2] == waiting_periods_eval(1, 4) / 2 == 0.125
    assert per[0] == per[1] == 0.5
    assert rp_system(log) == pytest.approx(per.mean())


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_perfect_alternation(n):
    fam = rp_family(make_pa_log(n, 9), priorities=PriorityVector.uniform(n))
    assert all(v == 1.0 for v in fam.values())


def test_equitable_targets():
    log = log_from(3, [[0], [1], [0], [2]] * 5)
    assert weighted_rp_system(log, [0.5, 0.25, 0.25]) == 1.0
    assert rp_system(log) < 1.0


def test_share_of_one_rejected():
    log = log_from(2, [[0]] * 4)
    with pytest.raises(ValueError):
        weighted_rp_system(log, [1.0, 0.0])


@pytest.mark.parametrize("shares", [[0.5, 0.6], [-0.1, 1.1], []])
def test_priority_vector_validation(shares):
    with pytest.raises(ValueError):
        PriorityVector(shares)


def test_priority_vector_snaps_floats():
    pv = PriorityVector([1 / 3] * 3)
    assert list(pv) == [Fraction(1, 3)] * 3


def test_variant_kinds():
    assert RpVariant("rp_rs_mxae").kinds[0].value == "reach"
    assert RpVariant("RP_EXCL").kinds == RpVariant.RP_EXCL.kinds


def test_reach_variant_counts_ties():
    # ties every other episode: no exclusive wins but a regular reach rhythm
    log = log_from(2, [[0, 1], []] * 6)
    assert rp_system(log, "rp_reach") == 1.0
    assert rp_system(log, "rp_excl") == pytest.approx(1 / 12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_family_bounded_and_consistent(n, seed):
    log = random_log(np.random.default_rng(seed), n, 5 * n)
    fam = rp_family(log)
    assert all(0.0 <= v <= 1.0 for v in fam.values())
    for variant in RpVariant:
        assert fam[variant.value] == rp_system(log, variant)
    assert fam["frp"] == fam["rp_excl"]
