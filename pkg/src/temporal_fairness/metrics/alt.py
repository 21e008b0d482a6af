"""Sliding-window ALT metrics.

A window of width ``n`` slides one episode at a time over the history,
giving ``episodes - n + 1`` batches. Each variant scores a batch and the
metric is the mean batch score. Per batch:

* ``y_k`` reachers in episode ``k``, ``t`` total arrivals (sum of ``y_k``);
* ``w`` episodes with exactly one reacher;
* ``f`` distinct agents that reached at least once;
* ``g`` distinct agents with at least one solo win.

Means are accumulated exactly (batch scores are rationals) and rounded to
float once, so the result does not depend on summation order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..log import EpisodeLog

__all__ = [
    "AltVariant",
    "BatchStats",
    "batch_score",
    "alt_metric",
    "alt_family",
    "alt_metric_reference",
    "alt_reference_family",
    "alt_ratio",
    "pa_equivalent_agents",
]


class AltVariant(str, enum.Enum):
    CALT = "calt"
    EALT = "ealt"
    AALT = "aalt"
    FALT = "falt"
    QFALT = "qfalt"
    QEALT = "qealt"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            for member in cls:
                if member.value == value.lower():
                    return member
        return None


@dataclass(frozen=True)
class BatchStats:
    f: int
    t: int
    w: int
    g: int
    y: tuple


def batch_score(stats: BatchStats, n: int, variant) -> Fraction:
    """Exact batch score of one window."""
    variant = AltVariant(variant)
    if variant is AltVariant.CALT:
        # an episode nobody reached earns nothing rather than n
        return Fraction(sum(n - y for y in stats.y if y > 0), n * (n - 1))
    if variant is AltVariant.EALT:
        return Fraction(stats.w, n)
    if variant is AltVariant.AALT:
        return Fraction(stats.g, n)
    if variant is AltVariant.FALT:
        return Fraction(stats.f, stats.t) if stats.t else Fraction(0)
    if variant is AltVariant.QFALT:
        return Fraction(stats.f, n) ** 2
    return Fraction(stats.w, n) ** 2


def _check_length(log: EpisodeLog):
    if len(log) < log.n:
        raise ValueError(
            f"ALT needs at least n={log.n} episodes, log has {len(log)}"
        )


def _reference_batches(log: EpisodeLog):
    outcomes = log.outcomes
    for j in range(len(outcomes) - log.n + 1):
        batch = outcomes[j:j + log.n]
        arrived = set()
        solo = set()
        for out in batch:
            arrived |= out.reachers
            if out.solo_winner is not None:
                solo.add(out.solo_winner)
        y = tuple(len(out.reachers) for out in batch)
        yield BatchStats(f=len(arrived), t=sum(y), w=sum(1 for v in y if v == 1),
                         g=len(solo), y=y)


def alt_reference_family(log: EpisodeLog) -> dict:
    """Recompute every window from scratch. Slow; used as a test oracle."""
    _check_length(log)
    totals = {v: Fraction(0) for v in AltVariant}
    windows = 0
    for stats in _reference_batches(log):
        windows += 1
        for v in AltVariant:
            totals[v] += batch_score(stats, log.n, v)
    return {v.value: float(total / windows) for v, total in totals.items()}


def alt_metric_reference(log: EpisodeLog, variant) -> float:
    return alt_reference_family(log)[AltVariant(variant).value]


class _Windows:
    """Per-window sums built from prefix sums over the episode axis."""

    def __init__(self, log: EpisodeLog):
        _check_length(log)
        self.log = log
        self.n = log.n
        self.count = len(log) - log.n + 1
        self.y = log.reach_counts

    def _slide(self, per_episode):
        prefix = np.concatenate(([0], np.cumsum(per_episode, dtype=np.int64)))
        return prefix[self.n:] - prefix[:-self.n]

    def _distinct(self, matrix):
        prefix = np.zeros((matrix.shape[0] + 1, self.n), dtype=np.int32)
        np.cumsum(matrix, axis=0, out=prefix[1:])
        inside = prefix[self.n:] - prefix[:-self.n]
        return np.count_nonzero(inside, axis=1)

    def t(self):
        return self._slide(self.y)

    def w(self):
        return self._slide(self.y == 1)

    def f(self):
        return self._distinct(self.log.reach_matrix())

    def g(self):
        return self._distinct(self.log.solo_matrix())

    def calt_sum(self):
        y = self.y
        return int(self._slide(np.where(y > 0, self.n - y, 0)).sum())


def _mean(total, denom) -> float:
    return float(Fraction(int(total), int(denom)))


def _score(win: _Windows, variant: AltVariant, cache: dict) -> float:
    def stat(name):
        if name not in cache:
            cache[name] = getattr(win, name)()
        return cache[name]

    n, count = win.n, win.count
    if variant is AltVariant.CALT:
        return _mean(win.calt_sum(), n * (n - 1) * count)
    if variant is AltVariant.EALT:
        return _mean(stat("w").sum(), n * count)
    if variant is AltVariant.QEALT:
        w = stat("w")
        return _mean((w * w).sum(), n * n * count)
    if variant is AltVariant.AALT:
        return _mean(stat("g").sum(), n * count)
    f = stat("f")
    if variant is AltVariant.QFALT:
        return _mean((f * f).sum(), n * n * count)
    # FALT: few distinct (f, t) pairs, so sum their exact ratios by histogram
    t = stat("t")
    width = n * n + 1
    hist = np.bincount(f * width + t)
    total = Fraction(0)
    for code in np.flatnonzero(hist):
        fv, tv = divmod(int(code), width)
        if tv:
            total += int(hist[code]) * Fraction(fv, tv)
    return float(total / count)


def alt_metric(log: EpisodeLog, variant) -> float:
    """Mean batch score of one ALT variant over all width-``n`` windows."""
    return _score(_Windows(log), AltVariant(variant), {})


def alt_family(log: EpisodeLog) -> dict:
    """All six variants, sharing the window statistics."""
    win = _Windows(log)
    cache: dict = {}
    return {v.value: _score(win, v, cache) for v in AltVariant}


def alt_ratio(value: float, variant) -> float:
    """Fraction of agents behaving as if in perfect alternation.

    CALT grows roughly quadratically in that fraction, hence the square
    root; EALT and AALT are already linear in it.
    """
    variant = AltVariant(variant)
    if not 0 <= value <= 1:
        raise ValueError(f"ALT value must lie in [0, 1], got {value}")
    if variant is AltVariant.CALT:
        return math.sqrt(value)
    if variant in (AltVariant.EALT, AltVariant.AALT):
        return value
    raise ValueError(f"AltRatio is not defined for {variant.value}")


def pa_equivalent_agents(calt: float, n: int) -> float:
    if not 0 <= calt <= 1:
        raise ValueError(f"CALT must lie in [0, 1], got {calt}")
    return n * math.sqrt(calt)
