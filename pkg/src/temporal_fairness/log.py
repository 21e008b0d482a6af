"""Episode history data model and win-event extraction.

Every metric in the package consumes an :class:`EpisodeLog`. The log is
stored column-wise so that the linear-time metrics can make a single pass
over it:

* ``solo`` holds the solo winner of each episode, or ``-1``;
* ``reach_ptr`` / ``reach_agents`` hold the reacher sets in CSR layout
  (episode ``e`` reached by ``reach_agents[reach_ptr[e]:reach_ptr[e + 1]]``);
* ``rewards`` is a ``(episodes, n)`` float array.

Episode numbers exposed to callers (``win_episodes``, the CSV ``episode``
column) are 1-based.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "EpisodeOutcome",
    "EpisodeLog",
    "WinEventKind",
    "GapProfile",
    "GapStatistics",
    "extract_gap_profile",
    "gap_statistics",
    "make_pa_log",
]


class WinEventKind(str, enum.Enum):
    """What counts as a win event for an agent."""

    EXCLUSIVE = "excl"  # sole victories only
    REACH = "reach"  # any terminal arrival, ties included


@dataclass(frozen=True)
class EpisodeOutcome:
    reachers: frozenset
    solo_winner: int | None
    rewards: tuple

    def __post_init__(self):
        reachers = frozenset(int(i) for i in self.reachers)
        object.__setattr__(self, "reachers", reachers)
        object.__setattr__(self, "rewards", tuple(float(r) for r in self.rewards))
        if any(i < 0 for i in reachers):
            raise ValueError(f"negative agent index in reachers {sorted(reachers)}")
        if len(reachers) == 1:
            (only,) = reachers
            if self.solo_winner != only:
                raise ValueError(
                    f"solo_winner must be {only} when it is the only reacher, "
                    f"got {self.solo_winner}"
                )
        elif self.solo_winner is not None:
            raise ValueError("solo_winner is only defined when exactly one agent reaches")
        for i, r in enumerate(self.rewards):
            if r < 0:
                raise ValueError(f"negative reward {r} for agent {i}")
            if r != 0 and i not in reachers:
                raise ValueError(f"agent {i} did not reach but was rewarded {r}")

    @classmethod
    def from_reachers(cls, reachers: Iterable[int], rewards: Sequence[float]):
        reachers = frozenset(reachers)
        solo = next(iter(reachers)) if len(reachers) == 1 else None
        return cls(reachers, solo, tuple(rewards))


class EpisodeLog:
    """Immutable ordered record of the outcomes of one run.

    Build one with :meth:`from_outcomes`, :meth:`from_reach_matrix` or
    :meth:`read_csv`. The constructor takes the raw columns and validates
    them.
    """

    def __init__(self, n, solo, reach_ptr, reach_agents, rewards):
        n = int(n)
        if n < 2:
            raise ValueError(f"need at least 2 agents, got n={n}")
        solo = np.asarray(solo, dtype=np.int16)
        reach_ptr = np.asarray(reach_ptr, dtype=np.int64)
        reach_agents = np.asarray(reach_agents, dtype=np.int16)
        rewards = np.asarray(rewards, dtype=np.float64)
        episodes = solo.shape[0]
        if episodes < 1:
            raise ValueError("an episode log needs at least one episode")
        if reach_ptr.shape != (episodes + 1,) or reach_ptr[0] != 0:
            raise ValueError("reach_ptr must have length episodes + 1 and start at 0")
        if reach_ptr[-1] != reach_agents.shape[0] or np.any(np.diff(reach_ptr) < 0):
            raise ValueError("reach_ptr is not a valid offset array")
        if rewards.shape != (episodes, n):
            raise ValueError(f"rewards must have shape ({episodes}, {n}), got {rewards.shape}")
        if reach_agents.size and (reach_agents.min() < 0 or reach_agents.max() >= n):
            raise ValueError(f"reacher index outside [0, {n})")
        counts = np.diff(reach_ptr)
        single = counts == 1
        expected_solo = np.full(episodes, -1, dtype=np.int16)
        expected_solo[single] = reach_agents[reach_ptr[:-1][single]]
        if not np.array_equal(solo, expected_solo):
            raise ValueError("solo column disagrees with the reacher sets")
        mask = _dense(episodes, n, reach_ptr, reach_agents)
        if np.any(rewards[~mask] != 0) or np.any(rewards < 0):
            raise ValueError("rewards must be non-negative and zero for non-reachers")

        self.n = n
        self.solo = solo
        self.reach_ptr = reach_ptr
        self.reach_agents = reach_agents
        # episode (0-based) of each entry of reach_agents
        self.reach_episodes = np.repeat(np.arange(episodes), counts)
        self.rewards = rewards
        for arr in (solo, reach_ptr, reach_agents, self.reach_episodes, rewards):
            arr.setflags(write=False)

    # construction -----------------------------------------------------

    @classmethod
    def from_outcomes(cls, n: int, outcomes: Iterable[EpisodeOutcome]) -> "EpisodeLog":
        outcomes = list(outcomes)
        ptr = [0]
        agents: list[int] = []
        solo = []
        rewards = np.zeros((len(outcomes), n))
        for e, out in enumerate(outcomes):
            agents.extend(sorted(out.reachers))
            ptr.append(len(agents))
            solo.append(-1 if out.solo_winner is None else out.solo_winner)
            if len(out.rewards) != n:
                raise ValueError(f"episode {e + 1}: expected {n} rewards, got {len(out.rewards)}")
            rewards[e] = out.rewards
        return cls(n, solo, ptr, agents, rewards)

    @classmethod
    def from_reach_matrix(cls, reached, rewards=None) -> "EpisodeLog":
        """Build a log from a boolean ``(episodes, n)`` reach matrix.

        Without explicit rewards, a solo reacher gets 100 and tied reachers
        get ``100 / n`` (the ILF scheme).
        """
        reached = np.asarray(reached, dtype=bool)
        episodes, n = reached.shape
        rows, cols = np.nonzero(reached)
        ptr = np.zeros(episodes + 1, dtype=np.int64)
        np.cumsum(reached.sum(axis=1), out=ptr[1:])
        counts = np.diff(ptr)
        solo = np.full(episodes, -1, dtype=np.int16)
        single = counts == 1
        solo[single] = cols[ptr[:-1][single]]
        if rewards is None:
            per_reacher = np.where(counts == 1, 100.0, 100.0 / n)
            rewards = reached * per_reacher[:, None]
        return cls(n, solo, ptr, cols, rewards)

    # access -----------------------------------------------------------

    def __len__(self) -> int:
        return self.solo.shape[0]

    @property
    def episodes(self) -> int:
        return len(self)

    def __getitem__(self, e: int) -> EpisodeOutcome:
        """Outcome of the episode at 0-based position ``e``."""
        if not -len(self) <= e < len(self):
            raise IndexError(e)
        e %= len(self)
        lo, hi = self.reach_ptr[e], self.reach_ptr[e + 1]
        winner = int(self.solo[e])
        return EpisodeOutcome(
            frozenset(int(a) for a in self.reach_agents[lo:hi]),
            None if winner < 0 else winner,
            tuple(self.rewards[e]),
        )

    def __iter__(self) -> Iterator[EpisodeOutcome]:
        for e in range(len(self)):
            yield self[e]

    @property
    def outcomes(self) -> list[EpisodeOutcome]:
        return list(self)

    @property
    def reach_counts(self) -> np.ndarray:
        return np.diff(self.reach_ptr)

    def reach_matrix(self) -> np.ndarray:
        out = np.zeros((len(self), self.n), dtype=bool)
        out[self.reach_episodes, self.reach_agents] = True
        return out

    def solo_matrix(self) -> np.ndarray:
        out = np.zeros((len(self), self.n), dtype=bool)
        won = np.flatnonzero(self.solo >= 0)
        out[won, self.solo[won]] = True
        return out

    def reward_totals(self) -> np.ndarray:
        return self.rewards.sum(axis=0)

    def __eq__(self, other):
        if not isinstance(other, EpisodeLog):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.reach_ptr, other.reach_ptr)
            and np.array_equal(self.reach_agents, other.reach_agents)
            and np.array_equal(self.rewards, other.rewards)
        )

    def __repr__(self):
        return f"EpisodeLog(n={self.n}, episodes={len(self)})"

    # serialization ----------------------------------------------------

    def write_csv(self, path) -> Path:
        """One row per episode; ``episode`` is 1-based, reachers are ``;``-joined."""
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["episode", "reachers", "solo_winner"]
                + [f"reward_{i}" for i in range(self.n)]
            )
            for e in range(len(self)):
                lo, hi = self.reach_ptr[e], self.reach_ptr[e + 1]
                winner = int(self.solo[e])
                writer.writerow(
                    [e + 1, ";".join(str(a) for a in self.reach_agents[lo:hi]),
                     "" if winner < 0 else winner]
                    + [repr(float(r)) for r in self.rewards[e]]
                )
        return path

    @classmethod
    def read_csv(cls, path) -> "EpisodeLog":
        path = Path(path)
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            reward_cols = [h for h in header if h.startswith("reward_")]
            n = len(reward_cols)
            if header[:3] != ["episode", "reachers", "solo_winner"] or n < 2:
                raise ValueError(f"{path}: not an episode log CSV (header {header})")
            ptr = [0]
            agents: list[int] = []
            solo = []
            rewards = []
            for lineno, row in enumerate(reader, start=2):
                if int(row[0]) != lineno - 1:
                    raise ValueError(f"{path}:{lineno}: episodes must be numbered 1, 2, ...")
                agents.extend(int(a) for a in row[1].split(";") if a != "")
                ptr.append(len(agents))
                solo.append(-1 if row[2] == "" else int(row[2]))
                rewards.append([float(x) for x in row[3:3 + n]])
        return cls(n, solo, ptr, agents, np.array(rewards).reshape(-1, n))


def _dense(episodes, n, reach_ptr, reach_agents):
    out = np.zeros((episodes, n), dtype=bool)
    out[np.repeat(np.arange(episodes), np.diff(reach_ptr)), reach_agents] = True
    return out


@dataclass(frozen=True)
class GapProfile:
    agent: int
    win_episodes: tuple
    gaps: tuple
    waiting_period_count: int

    @property
    def win_count(self) -> int:
        return len(self.win_episodes)

    @property
    def mean_gap(self) -> Fraction | None:
        """Exact mean inter-win gap, or None with fewer than two wins."""
        if len(self.gaps) == 0:
            return None
        return Fraction(sum(self.gaps), len(self.gaps))


def _win_episodes(log: EpisodeLog, agent: int, kind: WinEventKind) -> np.ndarray:
    kind = WinEventKind(kind)
    if kind is WinEventKind.EXCLUSIVE:
        hits = log.solo == agent
    else:
        hits = log.reach_matrix()[:, agent]
    return np.flatnonzero(hits) + 1


def extract_gap_profile(log: EpisodeLog, agent: int, kind=WinEventKind.EXCLUSIVE) -> GapProfile:
    """Per-agent wins, inter-win gaps and nonempty waiting periods.

    A waiting period is a maximal run of episodes without a win event for
    the agent. The run before the first win and the run after the last win
    are joined into one period, as if the history wrapped around; this is
    what gives every agent exactly ``episodes / n`` periods under perfect
    alternation. Zero-length runs (back-to-back wins, or a history that
    starts with the first win and ends with the last) are not counted.

    >>> log = EpisodeLog.from_outcomes(2, [EpisodeOutcome.from_reachers([0], [100, 0]),
    ...                                    EpisodeOutcome.from_reachers([1], [0, 100])])
    >>> extract_gap_profile(log, 0).waiting_period_count
    1
    """
    if not 0 <= agent < log.n:
        raise ValueError(f"agent {agent} out of range for n={log.n}")
    wins = [int(e) for e in _win_episodes(log, agent, kind)]
    gaps = tuple(b - a - 1 for a, b in zip(wins, wins[1:]))
    if not wins:
        periods = 1
    else:
        boundary = (wins[0] - 1) + (len(log) - wins[-1])
        periods = (boundary > 0) + sum(g > 0 for g in gaps)
    return GapProfile(agent, tuple(wins), gaps, int(periods))


@dataclass(frozen=True)
class GapStatistics:
    """Per-agent win counts, summed gaps and waiting-period counts."""

    win_count: np.ndarray
    gap_sum: np.ndarray
    waiting_periods: np.ndarray

    def mean_gap(self, agent: int) -> Fraction | None:
        k = int(self.win_count[agent])
        if k < 2:
            return None
        return Fraction(int(self.gap_sum[agent]), k - 1)


def gap_statistics(log: EpisodeLog, kind=WinEventKind.EXCLUSIVE) -> GapStatistics:
    """All agents' gap summaries in one pass over the win events.

    Equivalent to calling :func:`extract_gap_profile` for every agent, but
    linear in the number of win events rather than in ``episodes * n``.
    Only each agent's first win, last win, win count and number of
    back-to-back wins are needed:

    * summed gaps = last - first - (k - 1);
    * nonempty inner gaps = (k - 1) - back-to-back pairs;
    * one more period if the wrapped boundary run is nonempty.
    """
    kind = WinEventKind(kind)
    n, episodes = log.n, len(log)
    if kind is WinEventKind.EXCLUSIVE:
        solo = log.solo
        ep = np.flatnonzero(solo >= 0)
        agents = solo[ep].astype(np.intp)
        k = np.bincount(agents, minlength=n)
        first = np.full(n, episodes, dtype=np.int64)
        last = np.full(n, -1, dtype=np.int64)
        np.minimum.at(first, agents, ep)
        np.maximum.at(last, agents, ep)
        repeat = (solo[:-1] >= 0) & (solo[:-1] == solo[1:])
        back_to_back = np.bincount(solo[:-1][repeat].astype(np.intp), minlength=n)
    else:
        # stable sort groups events by agent, keeping episode order
        order = np.argsort(log.reach_agents, kind="stable")
        ep = log.reach_episodes[order]
        k = np.bincount(log.reach_agents, minlength=n)
        offsets = np.concatenate(([0], np.cumsum(k)[:-1]))
        has = k > 0
        first = np.full(n, episodes, dtype=np.int64)
        last = np.full(n, -1, dtype=np.int64)
        first[has] = ep[offsets[has]]
        last[has] = ep[offsets[has] + k[has] - 1]
        agents = log.reach_agents[order]
        repeat = (agents[1:] == agents[:-1]) & (np.diff(ep) == 1)
        back_to_back = np.bincount(agents[1:][repeat].astype(np.intp), minlength=n)
    pairs = np.maximum(k - 1, 0)
    gap_sum = np.where(k >= 2, last - first - pairs, 0)
    wrap = first + (episodes - 1 - last) > 0
    periods = np.where(k == 0, 1, pairs - back_to_back + wrap)
    return GapStatistics(k, gap_sum.astype(np.int64), periods.astype(np.int64))


def make_pa_log(n: int, periods: int, r_high: float = 100.0) -> EpisodeLog:
    """Perfect-alternation log: winners cycle 0, 1, ..., n-1, ``periods`` times."""
    if n < 2 or periods < 1:
        raise ValueError(f"need n >= 2 and periods >= 1, got n={n}, periods={periods}")
    episodes = n * periods
    winners = np.tile(np.arange(n), periods)
    rewards = np.zeros((episodes, n))
    rewards[np.arange(episodes), winners] = r_high
    return EpisodeLog(n, winners, np.arange(episodes + 1), winners, rewards)
