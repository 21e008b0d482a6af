"""Multi-Agent Battle of the Exes: a race to one shared resource cell.

Each agent starts ``distance`` steps away from the resource. At every step
each agent either advances one cell or holds. The episode ends at the first
step on which at least one agent stands on the resource (those agents are
the reachers) or when ``step_limit`` steps have elapsed with nobody there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

from .log import EpisodeOutcome

__all__ = [
    "Action",
    "RewardScheme",
    "Arena",
    "StateType",
    "EnvState",
    "encode_state",
    "state_space_size",
    "BattleOfExes",
    "run_episode",
]


class Action(enum.IntEnum):
    ADVANCE = 0
    HOLD = 1


ACTIONS = (Action.ADVANCE, Action.HOLD)


class StateType(str, enum.Enum):
    TYPE_A = "TypeA"  # positions only
    TYPE_B = "TypeB"  # positions + previous-episode solo-winner flags


@dataclass(frozen=True)
class RewardScheme:
    """Tie rewards: ILF pays ``r_high / n``, IQF pays ``r_high / n**2``.

    ``n`` is the configured agent count, not the number of tied agents.
    """

    kind: str = "ILF"
    r_high: float = 100.0

    def __post_init__(self):
        if self.kind not in ("ILF", "IQF"):
            raise ValueError(f"unknown reward scheme {self.kind!r}")
        if not self.r_high > 0:
            raise ValueError("r_high must be positive")

    def tie_reward(self, n: int) -> float:
        return self.r_high / n if self.kind == "ILF" else self.r_high / n**2

    def rewards(self, reachers, n: int) -> tuple:
        out = [0.0] * n
        if len(reachers) == 1:
            out[next(iter(reachers))] = self.r_high
        else:
            tie = self.tie_reward(n)
            for i in reachers:
                out[i] = tie
        return tuple(out)


@dataclass(frozen=True)
class Arena:
    distance: int = 3
    step_limit: int = 6

    def __post_init__(self):
        if self.distance < 1:
            raise ValueError("arena distance must be >= 1")
        if self.step_limit < self.distance:
            raise ValueError("step_limit must be at least the arena distance")


@dataclass(frozen=True)
class EnvState:
    positions: tuple
    winner_flags: tuple | None = None

    def __post_init__(self):
        if self.winner_flags is not None:
            if len(self.winner_flags) != len(self.positions):
                raise ValueError("one winner flag per agent")
            if sum(self.winner_flags) > 1:
                raise ValueError("at most one agent can be the previous solo winner")


def encode_state(env: EnvState, state_type=StateType.TYPE_A) -> tuple:
    """Hashable Q-table key for a state."""
    if StateType(state_type) is StateType.TYPE_A:
        return tuple(env.positions)
    if env.winner_flags is None:
        raise ValueError("Type-B encoding needs winner flags")
    return tuple(env.positions) + tuple(env.winner_flags)


def state_space_size(arena: Arena, n: int, state_type=StateType.TYPE_A) -> int:
    size = (arena.distance + 1) ** n
    if StateType(state_type) is StateType.TYPE_B:
        size *= n + 1  # no flag set, or exactly one
    return size


class BattleOfExes:
    """Stepwise environment; ``reset`` then ``step`` until ``done``.

    Winner flags carry over between episodes: they are set from the last
    episode's solo winner and cleared after a tie or a no-reach episode.
    """

    def __init__(self, n: int, arena: Arena = Arena(), scheme: RewardScheme = RewardScheme(),
                 state_type=StateType.TYPE_A):
        if n < 2:
            raise ValueError("MBoE needs at least two agents")
        self.n = n
        self.arena = arena
        self.scheme = scheme
        self.state_type = StateType(state_type)
        self.flags = (0,) * n
        self.positions = (0,) * n
        self.steps = 0
        self.outcome: EpisodeOutcome | None = None

    @property
    def state(self) -> EnvState:
        flags = self.flags if self.state_type is StateType.TYPE_B else None
        return EnvState(self.positions, flags)

    def key(self) -> tuple:
        if self.state_type is StateType.TYPE_A:
            return self.positions
        return self.positions + self.flags

    def reset(self) -> tuple:
        self.positions = (0,) * self.n
        self.steps = 0
        self.outcome = None
        return self.key()

    def step(self, actions: Sequence[int]):
        """Apply one joint action; returns ``(key, rewards, done)``."""
        if self.outcome is not None:
            raise RuntimeError("episode finished; call reset()")
        goal = self.arena.distance
        self.positions = tuple(
            p + 1 if a == Action.ADVANCE and p < goal else p
            for p, a in zip(self.positions, actions)
        )
        self.steps += 1
        reachers = [i for i, p in enumerate(self.positions) if p == goal]
        if not reachers and self.steps < self.arena.step_limit:
            return self.key(), (0.0,) * self.n, False
        rewards = self.scheme.rewards(reachers, self.n) if reachers else (0.0,) * self.n
        self.outcome = EpisodeOutcome.from_reachers(reachers, rewards)
        winner = self.outcome.solo_winner
        self.flags = tuple(int(i == winner) for i in range(self.n))
        return self.key(), rewards, True


def run_episode(arena: Arena, policy_actions: Callable[[int, EnvState], Sequence[int]],
                scheme: RewardScheme, n: int) -> EpisodeOutcome:
    """Play one episode with ``policy_actions(step, state) -> actions``."""
    env = BattleOfExes(n, arena, scheme)
    env.reset()
    done = False
    step = 0
    while not done:
        _, _, done = env.step(policy_actions(step, env.state))
        step += 1
    return env.outcome
