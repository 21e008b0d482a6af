"""Aggregate reward metrics: efficiency and reward fairness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..log import EpisodeLog


@dataclass(frozen=True)
class RewardTotals:
    totals: tuple
    episodes: int
    r_high: float = 100.0

    def __post_init__(self):
        totals = tuple(float(r) for r in self.totals)
        object.__setattr__(self, "totals", totals)
        if any(r < 0 for r in totals):
            raise ValueError("cumulative rewards must be non-negative")

    @classmethod
    def from_log(cls, log: EpisodeLog, r_high: float = 100.0) -> "RewardTotals":
        return cls(tuple(log.reward_totals()), len(log), r_high)

    @property
    def n(self) -> int:
        return len(self.totals)


def efficiency(totals: RewardTotals) -> float:
    """Share of the ``episodes * r_high`` ceiling actually paid out."""
    if totals.episodes < 1:
        raise ValueError("efficiency is undefined for an empty history")
    return sum(totals.totals) / (totals.episodes * totals.r_high)


def reward_fairness(totals: RewardTotals) -> tuple[float, bool]:
    """Total reward over ``n * max_i R_i``.

    Returns ``(value, degenerate)``; when nobody earned anything the value
    is reported as 0 with ``degenerate`` set.
    """
    top = max(totals.totals)
    if top == 0:
        return 0.0, True
    return float(np.sum(totals.totals) / (totals.n * top)), False
