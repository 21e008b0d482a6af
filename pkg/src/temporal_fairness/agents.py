"""Independent tabular Q-learners and the uniform random baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import ACTIONS, Action

__all__ = [
    "QLearnerParams",
    "QTable",
    "epsilon_at",
    "q_update",
    "select_action",
    "random_policy_action",
    "QLearner",
]


@dataclass(frozen=True)
class QLearnerParams:
    alpha_lr: float = 0.3
    gamma: float = 0.999
    eps_start: float = 0.9
    eps_end: float = 0.004
    eps_decay_fraction: float = 0.75

    def __post_init__(self):
        # alpha_lr = 0 is allowed as a frozen-table mode
        if not 0 <= self.alpha_lr <= 1:
            raise ValueError(f"alpha_lr must lie in [0, 1], got {self.alpha_lr}")
        if not 0 <= self.gamma < 1:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not self.eps_start >= self.eps_end >= 0:
            raise ValueError("need eps_start >= eps_end >= 0")
        if not 0 < self.eps_decay_fraction <= 1:
            raise ValueError("eps_decay_fraction must lie in (0, 1]")


class QTable(dict):
    """State key -> list of action values; unseen states read as zeros."""

    def values_for(self, state) -> list:
        row = self.get(state)
        if row is None:
            row = self[state] = [0.0] * len(ACTIONS)
        return row

    def value(self, state, action) -> float:
        row = self.get(state)
        return 0.0 if row is None else row[action]

    def best_value(self, state) -> float:
        row = self.get(state)
        return 0.0 if row is None else max(row)


def epsilon_at(episode: int, budget: int, params: QLearnerParams = QLearnerParams()) -> float:
    """Linear decay from ``eps_start`` at episode 1 to ``eps_end`` at
    episode ``ceil(eps_decay_fraction * budget)``, flat afterwards."""
    if not 1 <= episode <= budget:
        raise ValueError(f"episode {episode} outside [1, {budget}]")
    end = max(1, math.ceil(params.eps_decay_fraction * budget))
    if episode >= end:
        return params.eps_end
    frac = (episode - 1) / (end - 1)
    return params.eps_start + (params.eps_end - params.eps_start) * frac


def q_update(q: QTable, s, a, r: float, s_next, params: QLearnerParams = QLearnerParams(),
             terminal: bool = False) -> QTable:
    row = q.values_for(s)
    target = r if terminal else r + params.gamma * q.best_value(s_next)
    row[a] += params.alpha_lr * (target - row[a])
    return q


def select_action(q: QTable, s, eps: float, rng: np.random.Generator) -> Action:
    """Epsilon-greedy with uniform random tie-breaking among maximisers."""
    if rng.random() < eps:
        return ACTIONS[rng.integers(len(ACTIONS))]
    row = q.get(s)
    if row is None or row[0] == row[1]:
        return ACTIONS[rng.integers(len(ACTIONS))]
    return Action.ADVANCE if row[0] > row[1] else Action.HOLD


def random_policy_action(rng: np.random.Generator) -> Action:
    return ACTIONS[rng.integers(len(ACTIONS))]


class QLearner:
    """One independent learner: its own Q-table and random stream."""

    def __init__(self, params: QLearnerParams, rng: np.random.Generator):
        self.params = params
        self.rng = rng
        self.q = QTable()

    def act(self, state, eps: float) -> Action:
        return select_action(self.q, state, eps, self.rng)

    def learn(self, s, a, r, s_next, terminal):
        q_update(self.q, s, a, r, s_next, self.params, terminal=terminal)
