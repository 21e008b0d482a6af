"""Experiment configuration and episode budgets."""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..agents import QLearnerParams
from ..env import Arena, RewardScheme, StateType
from ..metrics import PriorityVector, RpWeights

__all__ = [
    "ExperimentConfig",
    "episode_budget",
    "RANDOM_BASELINE_EPISODES",
    "TABLE_BUDGETS",
    "results_root",
]

RANDOM_BASELINE_EPISODES = 10_000
# published budgets for n = 2, 3 differ from the scaling formula (1,000 and 4,722)
TABLE_BUDGETS = {2: 4_000, 3: 9_441}
POLICIES = ("QLearning", "Random")


def episode_budget(n: int, base: int = 1000, formula_only: bool = False) -> int:
    """``base * (n/2)**2 * (1 + ln(n!/2!))``, rounded to the nearest integer.

    The published budgets for two and three agents replace the formula
    unless ``formula_only`` is set.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not formula_only and base == 1000 and n in TABLE_BUDGETS:
        return TABLE_BUDGETS[n]
    log_ratio = math.lgamma(n + 1) - math.log(2)
    return int(round(base * (n / 2) ** 2 * (1 + log_ratio)))


def results_root() -> Path:
    return Path(os.environ.get("TFL_RESULTS_DIR", "results"))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    seed: int
    state_type: str = "TypeA"
    reward: str = "ILF"
    policy: str = "QLearning"
    episodes: int | None = None
    formula_only: bool = False
    arena_distance: int = 3
    step_limit: int = 6
    r_high: float = 100.0
    rp_weights: dict = field(default_factory=lambda: {"alpha_rs": 1.0, "beta_wpe": 1.0})
    priorities: list | None = None
    alpha_lr: float = 0.3
    gamma: float = 0.999
    eps_start: float = 0.9
    eps_end: float = 0.004
    eps_decay_fraction: float = 0.75
    label: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ValueError("seed must be an explicit integer")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        StateType(self.state_type)
        RewardScheme(self.reward, self.r_high)
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if self.episodes is not None and self.episodes < 1:
            raise ValueError("episodes override must be positive")
        Arena(self.arena_distance, self.step_limit)
        self.weights
        self.q_params
        if self.priorities is not None and len(self.priority_vector) != self.n:
            raise ValueError("priority vector length must equal n")

    # derived views ----------------------------------------------------

    @property
    def budget(self) -> int:
        if self.episodes is not None:
            return self.episodes
        if self.policy == "Random":
            return RANDOM_BASELINE_EPISODES
        return episode_budget(self.n, formula_only=self.formula_only)

    @property
    def arena(self) -> Arena:
        return Arena(self.arena_distance, self.step_limit)

    @property
    def scheme(self) -> RewardScheme:
        return RewardScheme(self.reward, self.r_high)

    @property
    def weights(self) -> RpWeights:
        return RpWeights(**self.rp_weights)

    @property
    def priority_vector(self) -> PriorityVector | None:
        return None if self.priorities is None else PriorityVector(self.priorities)

    @property
    def q_params(self) -> QLearnerParams:
        return QLearnerParams(self.alpha_lr, self.gamma, self.eps_start, self.eps_end,
                              self.eps_decay_fraction)

    @property
    def slug(self) -> str:
        base = f"n{self.n}_{self.policy}_{self.state_type}_{self.reward}_s{self.seed}"
        return f"{base}_{self.label}" if self.label else base

    def provenance(self) -> dict:
        return {
            "n": self.n,
            "episodes": self.budget,
            "state_type": self.state_type,
            "reward": self.reward,
            "policy": self.policy,
            "seed": self.seed,
            "label": self.label,
        }

    # (de)serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def load_configs(path) -> list:
    """A JSON file holding one config object or a list of them."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = [data]
    return [ExperimentConfig.from_dict(d) for d in data]


def paper_grid(seed: int = 0, ns=(2, 3, 5, 8, 10), episodes: int | None = None) -> list:
    """The 30-run correlation study: Q-learning over n x state type x
    reward scheme, plus one random baseline per (n, reward)."""
    configs = []
    for n in ns:
        for state_type in ("TypeA", "TypeB"):
            for reward in ("ILF", "IQF"):
                configs.append(ExperimentConfig(n=n, seed=seed, state_type=state_type,
                                                reward=reward, episodes=episodes))
        for reward in ("ILF", "IQF"):
            configs.append(ExperimentConfig(n=n, seed=seed, reward=reward, policy="Random",
                                            episodes=episodes))
    return configs
