"""Metric families over an :class:`~temporal_fairness.log.EpisodeLog`."""

from __future__ import annotations

import time

from ..log import EpisodeLog
from .alt import (
    AltVariant,
    BatchStats,
    alt_family,
    alt_metric,
    alt_metric_reference,
    alt_reference_family,
    alt_ratio,
    batch_score,
    pa_equivalent_agents,
)
from .classic import RewardTotals, efficiency, reward_fairness
from .rp import (
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

__all__ = [
    "AltVariant", "BatchStats", "alt_family", "alt_metric", "alt_metric_reference", "alt_reference_family",
    "alt_ratio", "batch_score", "pa_equivalent_agents",
    "RewardTotals", "efficiency", "reward_fairness",
    "PriorityVector", "RpVariant", "RpWeights", "awe_legacy", "gap_ratio",
    "rotational_score", "rp_family", "rp_per_agent", "rp_system",
    "waiting_periods_eval", "weighted_rp_system",
    "CLASSIC_KEYS", "ALT_KEYS", "RP_KEYS", "compute_metrics",
]

CLASSIC_KEYS = ("efficiency", "reward_fairness")
ALT_KEYS = tuple(v.value for v in AltVariant) + ("alt_ratio_calt", "pa_equivalent_agents")
RP_KEYS = (
    "rs_excl", "rs_reach", "wpe_excl", "wpe_reach", "awe_excl", "awe_reach",
    "rp_excl", "rp_reach", "rp_rs_mxae", "rp_rs_mxax", "frp", "erp",
)


def compute_metrics(log: EpisodeLog, weights: RpWeights = RpWeights(), priorities=None,
                    r_high: float = 100.0):
    """Every metric for one log.

    Returns ``(values, flags, timings)``: metric name -> value, flag name ->
    bool, family -> wall seconds. ``erp`` is only present with priorities;
    the ALT keys are absent when the log is shorter than ``n`` episodes.
    """
    values: dict = {}
    flags: dict = {}
    timings: dict = {}

    start = time.perf_counter()
    totals = RewardTotals.from_log(log, r_high)
    values["efficiency"] = efficiency(totals)
    values["reward_fairness"], flags["reward_fairness_degenerate"] = reward_fairness(totals)
    timings["classic"] = time.perf_counter() - start

    start = time.perf_counter()
    if len(log) >= log.n:
        alt = alt_family(log)
        values.update(alt)
        values["alt_ratio_calt"] = alt_ratio(alt["calt"], AltVariant.CALT)
        values["pa_equivalent_agents"] = pa_equivalent_agents(alt["calt"], log.n)
    timings["alt"] = time.perf_counter() - start

    start = time.perf_counter()
    values.update(rp_family(log, weights, priorities))
    timings["rp"] = time.perf_counter() - start
    return values, flags, timings
