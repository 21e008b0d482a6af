from .bench import TimingRecord, bench_metrics, synthetic_log
from .config import ExperimentConfig, episode_budget, load_configs, paper_grid
from .runner import run_experiment, simulate, sweep

__all__ = [
    "TimingRecord", "bench_metrics", "synthetic_log",
    "ExperimentConfig", "episode_budget", "load_configs", "paper_grid",
    "run_experiment", "simulate", "sweep",
]
