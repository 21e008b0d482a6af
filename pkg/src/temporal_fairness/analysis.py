"""Coordination scores and rank-correlation tables."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

__all__ = [
    "CoordinationComparison",
    "CorrelationCell",
    "coordination_score",
    "compare",
    "spearman",
    "pearson",
    "correlation_table",
    "RP_SUBMETRIC_ROWS",
    "ALT_PRIMARY_COLS",
]

RP_SUBMETRIC_ROWS = (
    "awe_excl", "wpe_excl", "rs_excl",
    "awe_reach", "wpe_reach", "rs_reach",
    "rp_excl", "rp_rs_mxae", "rp_reach",
)
ALT_PRIMARY_COLS = ("calt", "ealt", "aalt")


def coordination_score(m_ql: float, m_rand: float) -> float:
    """How far a learned policy sits above (positive) or below (negative)
    the random baseline, relative to the headroom the baseline leaves."""
    if m_rand >= 1:
        raise ValueError(f"baseline value {m_rand} leaves no headroom (needs < 1)")
    return (m_ql - m_rand) / (1 - m_rand)


@dataclass(frozen=True)
class CoordinationComparison:
    metric: str
    value_ql: float
    value_rand: float
    cs: float


def compare(metric: str, value_ql: float, value_rand: float) -> CoordinationComparison:
    """Coordination score for one metric; NaN when the baseline is at 1."""
    cs = coordination_score(value_ql, value_rand) if value_rand < 1 else math.nan
    return CoordinationComparison(metric, value_ql, value_rand, cs)


@dataclass(frozen=True)
class CorrelationCell:
    rho: float
    n_samples: int
    ase: float
    p_flag: str
    degenerate: bool = False
    method: str = "spearman"

    @property
    def p_value(self) -> float:
        return _two_sided_p(self.rho, self.n_samples)


def _two_sided_p(r: float, n: int) -> float:
    if math.isnan(r) or n <= 2:
        return math.nan
    if abs(r) >= 1:
        return 0.0
    t = r * math.sqrt((n - 2) / (1 - r * r))
    return float(2 * stats.t.sf(abs(t), n - 2))


def _flag(p: float) -> str:
    if p < 0.001:
        return "p<0.001"
    if p < 0.05:
        return "p<0.05"
    return "ns"


def _degenerate(n: int, method: str) -> CorrelationCell:
    return CorrelationCell(math.nan, n, math.nan, "ns", degenerate=True, method=method)


def _cell(r: float, n: int, method: str) -> CorrelationCell:
    # clamp rounding spill outside [-1, 1]
    r = max(-1.0, min(1.0, r))
    ase = math.sqrt((1 - r * r) / (n - 2)) if n > 2 else math.nan
    return CorrelationCell(r, n, ase, _flag(_two_sided_p(r, n)), method=method)


def _pearson_raw(x: np.ndarray, y: np.ndarray) -> float:
    dx, dy = x - x.mean(), y - y.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    return float(dx @ dy) / denom


def _prepare(xs, ys):
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        return None
    if x.size < 3 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        return None
    return x, y


def spearman(xs: Sequence[float], ys: Sequence[float]) -> CorrelationCell:
    """Spearman rho (Pearson on average ranks) with ASE and a t-test flag.

    Length mismatches, fewer than three points, non-finite values and
    constant inputs give a degenerate cell with ``rho = nan``.
    """
    pair = _prepare(xs, ys)
    if pair is None:
        return _degenerate(len(xs), "spearman")
    x, y = pair
    r = _pearson_raw(stats.rankdata(x), stats.rankdata(y))
    return _cell(r, x.size, "spearman")


def pearson(xs: Sequence[float], ys: Sequence[float]) -> CorrelationCell:
    """Pearson r on the raw values (auxiliary; labelled ``method='pearson'``)."""
    pair = _prepare(xs, ys)
    if pair is None:
        return _degenerate(len(xs), "pearson")
    return _cell(_pearson_raw(*pair), pair[0].size, "pearson")


def correlation_table(reports, rows=RP_SUBMETRIC_ROWS, cols=ALT_PRIMARY_COLS,
                      method: str = "spearman") -> dict:
    """``{(row, col): CorrelationCell}`` across a list of reports.

    ``reports`` may hold :class:`~temporal_fairness.report.MetricReport`
    objects or plain ``{metric: value}`` mappings.
    """
    reports = list(reports)
    if len(reports) < 3:
        raise ValueError(f"need at least 3 reports to correlate, got {len(reports)}")
    corr = spearman if method == "spearman" else pearson

    def series(key):
        return [float((r if isinstance(r, Mapping) else r.values).get(key, math.nan))
                for r in reports]

    return {(row, col): corr(series(row), series(col)) for row in rows for col in cols}
