"""Rotational Periodicity (RP) metrics.

Per agent, RP combines a rhythm score (RS, how close the mean inter-win
gap is to the ideal gap) with a frequency score (WPE, how close the number
of nonempty waiting periods is to the ideal count). Under uniform targets
the ideal gap is ``n - 1`` and the ideal count ``episodes / n``; with a
priority vector ``w`` they become ``1 / w_i - 1`` and ``w_i * episodes``.

Ratios are evaluated on exact fractions and rounded once, which keeps the
RS symmetry exact and lets uniform priorities reproduce the unweighted
numbers bit for bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from ..log import EpisodeLog, GapProfile, GapStatistics, WinEventKind, gap_statistics

__all__ = [
    "RpWeights",
    "PriorityVector",
    "RpVariant",
    "gap_ratio",
    "rotational_score",
    "waiting_periods_eval",
    "awe_legacy",
    "rp_per_agent",
    "rp_system",
    "weighted_rp_system",
    "rp_family",
]

EXCL, REACH = WinEventKind.EXCLUSIVE, WinEventKind.REACH


@dataclass(frozen=True)
class RpWeights:
    alpha_rs: float = 1.0
    beta_wpe: float = 1.0

    def __post_init__(self):
        if self.alpha_rs < 0 or self.beta_wpe < 0 or self.alpha_rs + self.beta_wpe <= 0:
            raise ValueError("RP weights must be non-negative with a positive sum")


class PriorityVector:
    """Per-agent target shares, positive and summing to one.

    Shares are snapped to the nearest fraction with a denominator of at
    most 10**9, so ``[1/3, 1/3, 1/3]`` given as floats is treated as exact
    thirds.
    """

    def __init__(self, shares):
        shares = [float(s) if not isinstance(s, Rational) else s for s in shares]
        if len(shares) < 2:
            raise ValueError("a priority vector needs one share per agent (n >= 2)")
        if any(s <= 0 for s in shares):
            raise ValueError(f"priority shares must be positive, got {shares}")
        if abs(sum(float(s) for s in shares) - 1.0) > 1e-9:
            raise ValueError(f"priority shares must sum to 1, got {sum(map(float, shares))}")
        self.shares = tuple(Fraction(s).limit_denominator(10**9) for s in shares)

    @classmethod
    def uniform(cls, n: int) -> "PriorityVector":
        return cls([Fraction(1, n)] * n)

    def __len__(self):
        return len(self.shares)

    def __iter__(self):
        return iter(self.shares)

    def __repr__(self):
        return f"PriorityVector({[float(s) for s in self.shares]})"

    def to_list(self) -> list:
        return [float(s) for s in self.shares]


class RpVariant(str, enum.Enum):
    """Named system RP variants: (RS event kind, WPE event kind)."""

    RP_EXCL = "rp_excl"
    RP_REACH = "rp_reach"
    RP_RS_MXAE = "rp_rs_mxae"
    RP_RS_MXAX = "rp_rs_mxax"

    @property
    def kinds(self) -> tuple:
        return _VARIANT_KINDS[self]

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            key = value.lower().replace("-", "_")
            for member in cls:
                if member.value == key:
                    return member
        return None


_VARIANT_KINDS = {
    RpVariant.RP_EXCL: (EXCL, EXCL),
    RpVariant.RP_REACH: (REACH, REACH),
    RpVariant.RP_RS_MXAE: (REACH, EXCL),
    RpVariant.RP_RS_MXAX: (EXCL, REACH),
}


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def gap_ratio(mean_gap, ideal_gap) -> float:
    """``min(mean, ideal) / max(mean, ideal)``, computed exactly."""
    mean, ideal = _exact(mean_gap), _exact(ideal_gap)
    if ideal <= 0:
        raise ValueError(f"ideal gap must be positive, got {ideal_gap}")
    if mean < 0:
        raise ValueError(f"mean gap cannot be negative, got {mean_gap}")
    return float(min(mean, ideal) / max(mean, ideal))


def rotational_score(profile: GapProfile, ideal_gap) -> float:
    """RS of one agent; zero unless the agent has at least two wins."""
    mean = profile.mean_gap
    if mean is None:
        if _exact(ideal_gap) <= 0:
            raise ValueError(f"ideal gap must be positive, got {ideal_gap}")
        return 0.0
    return gap_ratio(mean, ideal_gap)


def waiting_periods_eval(t: int, t_star) -> float:
    t_star = _exact(t_star)
    if t_star <= 0:
        raise ValueError(f"ideal waiting-period count must be positive, got {t_star}")
    if t >= 2 * t_star:
        return 0.0
    return float(1 - abs(t - t_star) / t_star)


def awe_legacy(profile: GapProfile, ideal_gap) -> float:
    """Deprecated rhythm score with a hard zero at twice the ideal gap.

    Kept only so that older results (and correlation tables that include
    it) can be reproduced; use :func:`rotational_score` instead.
    """
    return _awe(profile.mean_gap, _exact(ideal_gap))


def _awe(mean, ideal: Fraction) -> float:
    if ideal <= 0:
        raise ValueError(f"ideal gap must be positive, got {ideal}")
    if mean is None or mean >= 2 * ideal:
        return 0.0
    return float(max(Fraction(0), 1 - abs(mean - ideal) / ideal))


def _rs(mean, ideal: Fraction) -> float:
    return 0.0 if mean is None else gap_ratio(mean, ideal)


def rp_per_agent(rs: float, wpe: float, weights: RpWeights = RpWeights()) -> float:
    a, b = weights.alpha_rs, weights.beta_wpe
    return (a * rs + b * wpe) / (a + b)


def _system(rs_stats: GapStatistics, wpe_stats: GapStatistics, ideals, t_stars, weights) -> float:
    per_agent = [
        rp_per_agent(
            _rs(rs_stats.mean_gap(i), ideal),
            waiting_periods_eval(int(wpe_stats.waiting_periods[i]), t_star),
            weights,
        )
        for i, (ideal, t_star) in enumerate(zip(ideals, t_stars))
    ]
    return sum(per_agent) / len(per_agent)


def _uniform_targets(log: EpisodeLog):
    n = log.n
    return [Fraction(n - 1)] * n, [Fraction(len(log), n)] * n


def _weighted_targets(log: EpisodeLog, priorities: PriorityVector):
    if len(priorities) != log.n:
        raise ValueError(f"priority vector has {len(priorities)} shares for n={log.n}")
    if any(w == 1 for w in priorities):
        raise ValueError("a share of 1 gives an ideal gap of 0; RS is undefined")
    ideals = [1 / w - 1 for w in priorities]
    return ideals, [w * len(log) for w in priorities]


def rp_system(log: EpisodeLog, variant=RpVariant.RP_EXCL, weights: RpWeights = RpWeights()) -> float:
    """Mean per-agent RP under uniform targets."""
    rs_kind, wpe_kind = RpVariant(variant).kinds
    rs_stats = gap_statistics(log, rs_kind)
    wpe_stats = rs_stats if wpe_kind == rs_kind else gap_statistics(log, wpe_kind)
    return _system(rs_stats, wpe_stats, *_uniform_targets(log), weights)


def weighted_rp_system(log: EpisodeLog, priorities, weights: RpWeights = RpWeights()) -> float:
    """Equitable RP: exclusive wins, per-agent targets from ``priorities``."""
    if not isinstance(priorities, PriorityVector):
        priorities = PriorityVector(priorities)
    stats = gap_statistics(log, EXCL)
    return _system(stats, stats, *_weighted_targets(log, priorities), weights)


def rp_family(log: EpisodeLog, weights: RpWeights = RpWeights(), priorities=None) -> dict:
    """Every RP sub-metric and named variant, one gap pass per event kind."""
    stats = {EXCL: gap_statistics(log, EXCL), REACH: gap_statistics(log, REACH)}
    ideals, t_stars = _uniform_targets(log)
    out = {}
    for kind, s in stats.items():
        rs = [_rs(s.mean_gap(i), ideals[i]) for i in range(log.n)]
        wpe = [waiting_periods_eval(int(s.waiting_periods[i]), t_stars[i]) for i in range(log.n)]
        awe = [_awe(s.mean_gap(i), ideals[i]) for i in range(log.n)]
        out[f"rs_{kind.value}"] = sum(rs) / log.n
        out[f"wpe_{kind.value}"] = sum(wpe) / log.n
        out[f"awe_{kind.value}"] = sum(awe) / log.n
    for variant in RpVariant:
        rs_kind, wpe_kind = variant.kinds
        out[variant.value] = _system(stats[rs_kind], stats[wpe_kind], ideals, t_stars, weights)
    out["frp"] = _system(stats[EXCL], stats[EXCL],
                         *_weighted_targets(log, PriorityVector.uniform(log.n)), weights)
    if priorities is not None:
        if not isinstance(priorities, PriorityVector):
            priorities = PriorityVector(priorities)
        out["erp"] = _system(stats[EXCL], stats[EXCL],
                             *_weighted_targets(log, priorities), weights)
    return out


def per_agent_rp(log: EpisodeLog, variant=RpVariant.RP_EXCL, weights: RpWeights = RpWeights()) -> np.ndarray:
    """Per-agent RP values (same targets as :func:`rp_system`)."""
    rs_kind, wpe_kind = RpVariant(variant).kinds
    rs_stats, wpe_stats = gap_statistics(log, rs_kind), gap_statistics(log, wpe_kind)
    ideals, t_stars = _uniform_targets(log)
    return np.array([
        rp_per_agent(_rs(rs_stats.mean_gap(i), ideals[i]),
                     waiting_periods_eval(int(wpe_stats.waiting_periods[i]), t_stars[i]),
                     weights)
        for i in range(log.n)
    ])
