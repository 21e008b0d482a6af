"""Temporal fairness metrics for repeated multi-agent resource competition.

Simulates the Multi-Agent Battle of the Exes, scores win histories with the
ALT (sliding-window) and RP (rotational periodicity) metric families, and
benchmarks and correlates them.
"""

from .analysis import coordination_score, correlation_table, spearman
from .env import Arena, BattleOfExes, RewardScheme, StateType, encode_state, run_episode
from .log import (
    EpisodeLog,
    EpisodeOutcome,
    GapProfile,
    WinEventKind,
    extract_gap_profile,
    gap_statistics,
    make_pa_log,
)
from .metrics import (
    AltVariant,
    PriorityVector,
    RpVariant,
    RpWeights,
    alt_metric,
    compute_metrics,
    rp_system,
    weighted_rp_system,
)
from .report import MetricReport

__version__ = "0.1.0"

__all__ = [
    "coordination_score", "correlation_table", "spearman",
    "Arena", "BattleOfExes", "RewardScheme", "StateType", "encode_state", "run_episode",
    "EpisodeLog", "EpisodeOutcome", "GapProfile", "WinEventKind", "extract_gap_profile",
    "gap_statistics", "make_pa_log",
    "AltVariant", "PriorityVector", "RpVariant", "RpWeights", "alt_metric",
    "compute_metrics", "rp_system", "weighted_rp_system",
    "MetricReport",
]
