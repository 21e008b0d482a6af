"""Wall-clock comparison of the metric families."""

from __future__ import annotations

import platform
import statistics
import time
from dataclasses import asdict, dataclass

import numpy as np

from ..log import EpisodeLog
from ..metrics import AltVariant, RewardTotals, alt_metric, efficiency, reward_fairness, rp_family

__all__ = ["TimingRecord", "synthetic_log", "time_call", "bench_metrics"]


@dataclass(frozen=True)
class TimingRecord:
    family: str
    wall_seconds: float
    n: int
    episodes: int
    machine: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def synthetic_log(n: int, episodes: int, seed: int = 0, reach_prob: float | None = None) -> EpisodeLog:
    """Each agent independently reaches with probability ``1/n`` per episode."""
    rng = np.random.default_rng(seed)
    p = 1.0 / n if reach_prob is None else reach_prob
    return EpisodeLog.from_reach_matrix(rng.random((episodes, n)) < p)


def time_call(fn, trials: int) -> float:
    """Median wall time over ``trials`` runs after one warm-up call."""
    fn()
    times = []
    for _ in range(trials):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def _alt_all(log):
    # each variant computed on its own, as a caller asking for all six would
    return [alt_metric(log, v) for v in AltVariant]


def _classic(log):
    totals = RewardTotals.from_log(log)
    return efficiency(totals), reward_fairness(totals)


def bench_metrics(n: int, episodes: int, trials: int = 5, seed: int = 0,
                  machine: str | None = None) -> list:
    """Median single-threaded time of the RP family, the six ALT variants
    and the classic metrics on one synthetic log."""
    if trials < 3:
        raise ValueError("use at least 3 trials")
    log = synthetic_log(n, episodes, seed)
    note = machine if machine is not None else f"{platform.machine()} {platform.python_implementation()}"
    return [
        TimingRecord("RP", time_call(lambda: rp_family(log), trials), n, episodes, note),
        TimingRecord("ALT", time_call(lambda: _alt_all(log), trials), n, episodes, note),
        TimingRecord("classic", time_call(lambda: _classic(log), trials), n, episodes, note),
    ]


def speedup(records) -> float:
    by = {r.family: r.wall_seconds for r in records}
    return by["ALT"] / by["RP"]
