"""scikit-learn compatible wrappers.

Each sample is one episode log (an :class:`EpisodeLog`, or a boolean
``(episodes, n)`` reach matrix), so ``X`` is a list of logs and the output
is a ``(len(X), n_metrics)`` array. This lets the metrics sit inside
pipelines, ``FunctionTransformer`` chains or grid searches over the RP
weights.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analysis import coordination_score
from .log import EpisodeLog
from .metrics import ALT_KEYS, CLASSIC_KEYS, RP_KEYS, PriorityVector, RpWeights, compute_metrics

__all__ = ["check_episode_log", "check_logs", "TemporalFairnessTransformer", "CoordinationScorer"]

ALL_KEYS = CLASSIC_KEYS + ALT_KEYS + RP_KEYS


def check_episode_log(log, n: int | None = None) -> EpisodeLog:
    """Coerce one sample to an :class:`EpisodeLog` and check its agent count."""
    if not isinstance(log, EpisodeLog):
        arr = np.asarray(log)
        if arr.ndim != 2 or arr.shape[1] < 2:
            raise ValueError(
                f"expected an EpisodeLog or an (episodes, n >= 2) reach matrix, got shape {arr.shape}"
            )
        if arr.dtype != bool and not np.isin(arr, (0, 1)).all():
            raise ValueError("reach matrix entries must be 0/1")
        log = EpisodeLog.from_reach_matrix(arr.astype(bool))
    if n is not None and log.n != n:
        raise ValueError(f"log has {log.n} agents, expected {n}")
    return log


def check_logs(X) -> list:
    """Coerce ``X`` to a non-empty list of logs. A single log is wrapped."""
    if isinstance(X, EpisodeLog):
        return [X]
    arr = None
    if isinstance(X, np.ndarray) and X.ndim == 2:
        arr = X
    if arr is not None:
        return [check_episode_log(arr)]
    logs = [check_episode_log(x) for x in X]
    if not logs:
        raise ValueError("X contains no episode logs")
    return logs


class TemporalFairnessTransformer(TransformerMixin, BaseEstimator):
    """Map episode logs to a matrix of fairness metrics.

    Parameters
    ----------
    metrics : sequence of str, optional
        Metric keys to emit, in order. Defaults to every classic, ALT and
        RP key (``erp`` only when ``priorities`` is set).
    alpha_rs, beta_wpe : float
        RS and WPE weights in the RP combination.
    priorities : sequence of float, optional
        Target shares for the equitable RP variant.
    r_high : float
        Solo-win reward used by the efficiency metric.
    """

    def __init__(self, metrics=None, alpha_rs=1.0, beta_wpe=1.0, priorities=None, r_high=100.0):
        self.metrics = metrics
        self.alpha_rs = alpha_rs
        self.beta_wpe = beta_wpe
        self.priorities = priorities
        self.r_high = r_high

    def _keys(self):
        if self.metrics is not None:
            keys = tuple(self.metrics)
            unknown = [k for k in keys if k not in ALL_KEYS]
            if unknown:
                raise ValueError(f"unknown metric keys {unknown}")
            return keys
        keys = ALL_KEYS
        if self.priorities is None:
            keys = tuple(k for k in keys if k != "erp")
        return keys

    def fit(self, X, y=None):
        logs = check_logs(X)
        self.weights_ = RpWeights(self.alpha_rs, self.beta_wpe)
        self.priority_vector_ = None if self.priorities is None else PriorityVector(self.priorities)
        if self.priority_vector_ is not None and len(self.priority_vector_) != logs[0].n:
            raise ValueError("priorities length must match the agent count")
        self.feature_names_out_ = np.array(self._keys(), dtype=object)
        self.n_agents_ = logs[0].n
        return self

    def transform(self, X):
        check_is_fitted(self, "feature_names_out_")
        logs = check_logs(X)
        out = np.empty((len(logs), len(self.feature_names_out_)))
        for row, log in enumerate(logs):
            priorities = self.priority_vector_
            if priorities is not None and len(priorities) != log.n:
                raise ValueError(f"log {row} has {log.n} agents, priorities have {len(priorities)}")
            values, _, _ = compute_metrics(log, self.weights_, priorities, self.r_high)
            out[row] = [values.get(k, np.nan) for k in self.feature_names_out_]
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "feature_names_out_")
        return self.feature_names_out_.copy()


class CoordinationScorer(TransformerMixin, BaseEstimator):
    """Coordination scores against a random baseline.

    ``fit`` takes logs from the random policy and stores the mean of each
    metric; ``transform`` scores learned-policy logs against it. Negative
    scores mean worse than chance.
    """

    def __init__(self, metrics=("rp_excl", "calt", "ealt", "aalt"), alpha_rs=1.0, beta_wpe=1.0):
        self.metrics = metrics
        self.alpha_rs = alpha_rs
        self.beta_wpe = beta_wpe

    def _scorer(self):
        return TemporalFairnessTransformer(list(self.metrics), self.alpha_rs, self.beta_wpe)

    def fit(self, X, y=None):
        logs = check_logs(X)
        values = self._scorer().fit(logs).transform(logs)
        self.baseline_ = values.mean(axis=0)
        if np.any(self.baseline_ >= 1):
            bad = [m for m, b in zip(self.metrics, self.baseline_) if b >= 1]
            raise ValueError(f"baseline already at 1 for {bad}; scores undefined")
        self.n_agents_ = logs[0].n
        return self

    def transform(self, X):
        check_is_fitted(self, "baseline_")
        logs = check_logs(X)
        values = self._scorer().fit(logs).transform(logs)
        return np.array([[coordination_score(v, b) for v, b in zip(row, self.baseline_)]
                         for row in values])

    def get_feature_names_out(self, input_features=None):
        return np.array([f"cs_{m}" for m in self.metrics], dtype=object)
