import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from temporal_fairness.log import (
    EpisodeLog,
    EpisodeOutcome,
    WinEventKind,
    extract_gap_profile,
    gap_statistics,
    make_pa_log,
)

from conftest import log_from, random_log


def winners_log(n, episodes, wins):
    """Agent 0 solo-wins at the given 1-based episodes, agent 1 otherwise."""
    return log_from(n, [[0] if e in wins else [1] for e in range(1, episodes + 1)])


class TestEpisodeOutcome:
    def test_solo_winner_derived(self):
        out = EpisodeOutcome.from_reachers([2], [0, 0, 100])
        assert out.solo_winner == 2

    def test_tie_has_no_solo_winner(self):
        out = EpisodeOutcome.from_reachers([0, 1], [50, 50])
        assert out.solo_winner is None

    def test_no_reacher_is_representable(self):
        out = EpisodeOutcome.from_reachers([], [0, 0])
        assert out.reachers == frozenset() and out.solo_winner is None

    @pytest.mark.parametrize("reachers,solo", [({0}, None), ({0}, 1), ({0, 1}, 0)])
    def test_solo_invariant_enforced(self, reachers, solo):
        with pytest.raises(ValueError):
            EpisodeOutcome(frozenset(reachers), solo, (0.0, 0.0))

    def test_reward_outside_reachers_rejected(self):
        with pytest.raises(ValueError):
            EpisodeOutcome(frozenset({0}), 0, (100.0, 5.0))


class TestEpisodeLog:
    def test_agent_index_must_be_below_n(self):
        with pytest.raises(ValueError):
            EpisodeLog.from_outcomes(2, [EpisodeOutcome.from_reachers([2], [0, 0, 100])])

    def test_needs_two_agents(self):
        with pytest.raises(ValueError):
            EpisodeLog(1, [0], [0, 1], [0], [[100.0]])

    def test_round_trip_outcomes(self):
        episodes = [[0], [0, 1], [], [1], [0, 1, 2]]
        log = log_from(3, episodes)
        assert [sorted(o.reachers) for o in log] == [sorted(e) for e in episodes]
        assert [o.solo_winner for o in log] == [0, None, None, 1, None]
        assert len(log) == 5

    def test_csv_round_trip(self, tmp_path, rng):
        log = random_log(rng, 4, 50)
        path = log.write_csv(tmp_path / "log.csv")
        assert EpisodeLog.read_csv(path) == log

    def test_csv_layout(self, tmp_path):
        log = log_from(2, [[0], [0, 1], []])
        lines = log.write_csv(tmp_path / "l.csv").read_text().splitlines()
        assert lines[0] == "episode,reachers,solo_winner,reward_0,reward_1"
        assert lines[1] == "1,0,0,100.0,0.0"
        assert lines[2] == "2,0;1,,50.0,50.0"
        assert lines[3] == "3,,,0.0,0.0"

    def test_from_reach_matrix_matches_outcomes(self, rng):
        m = rng.random((30, 3)) < 0.4
        log = EpisodeLog.from_reach_matrix(m)
        assert np.array_equal(log.reach_matrix(), m)
        for row, out in zip(m, log):
            assert out.reachers == frozenset(np.flatnonzero(row))

    def test_columns_are_read_only(self):
        log = make_pa_log(2, 3)
        with pytest.raises(ValueError):
            log.solo[0] = 1


class TestGapProfile:
    def test_hand_enumerated_profile(self):
        # wins at 2, 5, 9 of 10: runs {1}, {3,4}, {6,7,8}, {10}; {10} and {1} wrap into one
        prof = extract_gap_profile(winners_log(2, 10, {2, 5, 9}), 0)
        assert prof.win_episodes == (2, 5, 9)
        assert prof.gaps == (2, 3)
        assert prof.waiting_period_count == 3
        assert prof.win_count == 3

    def test_pa_two_agents(self):
        prof = extract_gap_profile(make_pa_log(2, 2), 0)
        assert prof.win_episodes == (1, 3)
        assert prof.gaps == (1,)
        assert prof.waiting_period_count == 2

    def test_never_wins(self):
        prof = extract_gap_profile(winners_log(2, 10, set()), 0)
        assert prof.gaps == () and prof.win_count == 0
        assert prof.waiting_period_count == 1

    def test_back_to_back_wins_add_no_period(self):
        prof = extract_gap_profile(winners_log(2, 6, {1, 2, 3, 4, 5, 6}), 0)
        assert prof.gaps == (0,) * 5
        assert prof.waiting_period_count == 0

    def test_agent_out_of_range(self):
        with pytest.raises(ValueError):
            extract_gap_profile(make_pa_log(2, 2), 2)

    def test_reach_kind_counts_ties(self):
        log = log_from(2, [[0, 1], [0], [1], [0, 1]])
        assert extract_gap_profile(log, 0, WinEventKind.EXCLUSIVE).win_episodes == (2,)
        assert extract_gap_profile(log, 0, WinEventKind.REACH).win_episodes == (1, 2, 4)

    @pytest.mark.parametrize("n,periods", [(2, 5), (3, 4), (5, 7), (10, 3)])
    def test_pa_gaps_and_periods(self, n, periods):
        log = make_pa_log(n, periods)
        for i in range(n):
            prof = extract_gap_profile(log, i)
            assert set(prof.gaps) == {n - 1}
            assert prof.waiting_period_count == periods == len(log) // n


def test_make_pa_log_winner_cycle():
    assert [o.solo_winner for o in make_pa_log(2, 2)] == [0, 1, 0, 1]
    assert [o.solo_winner for o in make_pa_log(3, 1)] == [0, 1, 2]
    assert all(len(o.reachers) == 1 for o in make_pa_log(4, 3))


logs = st.integers(2, 5).flatmap(
    lambda n: st.lists(st.sets(st.integers(0, n - 1), max_size=n), min_size=1, max_size=40)
    .map(lambda eps: log_from(n, [sorted(e) for e in eps]))
)


@settings(max_examples=200, deadline=None)
@given(logs)
def test_exclusive_wins_sum_to_solo_episodes(log):
    total = sum(extract_gap_profile(log, i).win_count for i in range(log.n))
    assert total == sum(1 for o in log if len(o.reachers) == 1)


@settings(max_examples=200, deadline=None)
@given(logs)
def test_reach_wins_dominate_exclusive(log):
    for i in range(log.n):
        excl = extract_gap_profile(log, i, WinEventKind.EXCLUSIVE)
        reach = extract_gap_profile(log, i, WinEventKind.REACH)
        assert reach.win_count >= excl.win_count


@settings(max_examples=300, deadline=None)
@given(logs, st.sampled_from(list(WinEventKind)))
def test_fast_gap_statistics_match_profiles(log, kind):
    stats = gap_statistics(log, kind)
    for i in range(log.n):
        prof = extract_gap_profile(log, i, kind)
        assert stats.win_count[i] == prof.win_count
        assert stats.gap_sum[i] == sum(prof.gaps)
        assert stats.waiting_periods[i] == prof.waiting_period_count
        assert stats.mean_gap(i) == prof.mean_gap
