import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import log_from
from temporal_fairness.log import make_pa_log
from temporal_fairness.metrics import RewardTotals, efficiency, reward_fairness


@pytest.mark.parametrize("n", [2, 3, 5])
def test_perfect_alternation(n):
    totals = RewardTotals.from_log(make_pa_log(n, 20))
    assert efficiency(totals) == 1.0
    assert reward_fairness(totals) == (1.0, False)


def test_iqf_ties_halve_efficiency():
    log = log_from(2, [[0, 1]] * 4)
    # rebuild with IQF rewards: 100 / n^2 each
    totals = RewardTotals((4 * 25.0, 4 * 25.0), 4)
    assert efficiency(totals) == 0.5
    assert efficiency(RewardTotals.from_log(log)) == 1.0


def test_monopoly_fairness():
    assert reward_fairness(RewardTotals((400.0, 0.0), 4)) == (0.5, False)
    assert efficiency(RewardTotals((400.0, 0.0), 4)) == 1.0


def test_degenerate_all_zero():
    assert reward_fairness(RewardTotals((0.0, 0.0, 0.0), 5)) == (0.0, True)


def test_validation():
    with pytest.raises(ValueError):
        RewardTotals((-1.0, 2.0), 3)
    with pytest.raises(ValueError):
        efficiency(RewardTotals((0.0, 0.0), 0))


@given(
    st.lists(st.floats(0, 1e4, allow_nan=False), min_size=2, max_size=8).filter(lambda r: max(r) > 0),
    st.floats(0.01, 100),
)
def test_fairness_scale_invariant_and_bounded(rewards, scale):
    rf, _ = reward_fairness(RewardTotals(rewards, 10))
    rf2, _ = reward_fairness(RewardTotals([r * scale for r in rewards], 10))
    assert 1 / len(rewards) - 1e-12 <= rf <= 1 + 1e-12
    assert rf == pytest.approx(rf2, rel=1e-9)
