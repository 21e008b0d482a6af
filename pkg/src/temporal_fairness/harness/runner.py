"""Simulation runs, sweeps and result files.

Seeding: each config's ``seed`` feeds ``numpy.random.SeedSequence``, which
is split with ``spawn(n)`` into one independent PCG64 stream per agent.
Agent ``i`` draws every exploration, tie-break and random-policy action
from stream ``i``, so a (config, seed) pair reproduces the same log on any
platform numpy supports.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import traceback
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..agents import QLearner, epsilon_at, random_policy_action
from ..analysis import ALT_PRIMARY_COLS, RP_SUBMETRIC_ROWS, compare, correlation_table, pearson
from ..env import BattleOfExes
from ..log import EpisodeLog
from ..metrics import ALT_KEYS, CLASSIC_KEYS, RP_KEYS, compute_metrics
from ..report import PROVENANCE_KEYS, MetricReport
from .config import ExperimentConfig, results_root

log = logging.getLogger(__name__)

__all__ = ["agent_streams", "simulate", "run_experiment", "sweep", "write_csv", "read_csv_rows"]

METRIC_KEYS = CLASSIC_KEYS + ALT_KEYS + RP_KEYS
CS_METRICS = ("rp_excl", "calt", "ealt", "aalt")


class ResultsWriteError(OSError):
    pass


def agent_streams(seed: int, n: int) -> list:
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]


def simulate(config: ExperimentConfig) -> EpisodeLog:
    """Play the full episode budget and return the win history."""
    n, budget = config.n, config.budget
    env = BattleOfExes(n, config.arena, config.scheme, config.state_type)
    rngs = agent_streams(config.seed, n)
    outcomes = []
    if config.policy == "Random":
        for _ in range(budget):
            env.reset()
            done = False
            while not done:
                _, _, done = env.step([random_policy_action(r) for r in rngs])
            outcomes.append(env.outcome)
        return EpisodeLog.from_outcomes(n, outcomes)

    params = config.q_params
    agents = [QLearner(params, r) for r in rngs]
    for episode in range(1, budget + 1):
        eps = epsilon_at(episode, budget, params)
        state = env.reset()
        done = False
        while not done:
            actions = [a.act(state, eps) for a in agents]
            nxt, rewards, done = env.step(actions)
            for agent, action, reward in zip(agents, actions, rewards):
                agent.learn(state, action, reward, nxt, done)
            state = nxt
        outcomes.append(env.outcome)
    return EpisodeLog.from_outcomes(n, outcomes)


def report_for(log_: EpisodeLog, config: ExperimentConfig) -> MetricReport:
    values, flags, timings = compute_metrics(
        log_, config.weights, config.priority_vector, config.r_high
    )
    provenance = config.provenance()
    provenance["episodes"] = len(log_)
    return MetricReport(values, provenance, flags, timings)


def run_experiment(config: ExperimentConfig, out_dir=None):
    """Simulate one config, compute every metric and write both to disk.

    Files go to ``<out_dir>/<config.slug>/`` (``log.csv``, ``report.json``,
    ``config.json``); ``out_dir`` defaults to ``$TFL_RESULTS_DIR`` or
    ``./results``.
    """
    episode_log = simulate(config)
    report = report_for(episode_log, config)
    target = Path(out_dir if out_dir is not None else results_root()) / config.slug
    try:
        target.mkdir(parents=True, exist_ok=True)
        episode_log.write_csv(target / "log.csv")
        report.write_json(target / "report.json")
        (target / "config.json").write_text(_json(config.to_dict()), encoding="utf-8")
    except OSError as exc:
        raise ResultsWriteError(f"could not write results under {target}: {exc}") from exc
    return episode_log, report


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _run_one(args):
    config, out_dir = args
    try:
        _, report = run_experiment(config, out_dir)
        return config, report, None
    except Exception:  # recorded per config; the sweep carries on
        return config, None, traceback.format_exc()


def write_csv(path, rows, columns=None) -> Path:
    path = Path(path)
    rows = list(rows)
    if columns is None:
        columns = []
        for row in rows:
            columns.extend(k for k in row if k not in columns)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _cell(row.get(k, "")) for k in columns})
    except OSError as exc:
        raise ResultsWriteError(f"could not write {path}: {exc}") from exc
    return path


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def read_csv_rows(path) -> list:
    """Rows as dicts; numeric-looking cells become int or float."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return [{k: _parse(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def _parse(v: str):
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    return v


def coordination_rows(reports) -> list:
    """CS for each Q-learning report against the random baselines with the
    same (n, reward); several baselines are averaged."""
    baselines = defaultdict(list)
    for r in reports:
        if r.provenance.get("policy") == "Random":
            baselines[(r.provenance["n"], r.provenance["reward"])].append(r)
    rows = []
    for r in reports:
        if r.provenance.get("policy") != "QLearning":
            continue
        matched = baselines.get((r.provenance["n"], r.provenance["reward"]))
        if not matched:
            continue
        for metric in CS_METRICS:
            rand = float(np.mean([b.values.get(metric, math.nan) for b in matched]))
            cmp_ = compare(metric, r.values.get(metric, math.nan), rand)
            rows.append({
                **{k: r.provenance.get(k) for k in PROVENANCE_KEYS},
                "metric": metric,
                "value_ql": cmp_.value_ql,
                "value_rand": cmp_.value_rand,
                "baseline_runs": len(matched),
                "cs": cmp_.cs,
                "degenerate": int(math.isnan(cmp_.cs)),
            })
    return rows


def correlation_rows(reports, rows=RP_SUBMETRIC_ROWS, cols=ALT_PRIMARY_COLS) -> list:
    table = correlation_table(reports, rows, cols)
    return [
        {"row_metric": r, "col_metric": c, "rho": cell.rho, "ase": cell.ase,
         "n": cell.n_samples, "p_flag": "degenerate" if cell.degenerate else cell.p_flag}
        for (r, c), cell in table.items()
    ]


def traditional_pearson_rows(reports) -> list:
    """Pearson r between system RP and the reward metrics (raw values)."""
    out = []
    rp = [r.values.get("rp_excl", math.nan) for r in reports]
    for col in CLASSIC_KEYS:
        cell = pearson(rp, [r.values.get(col, math.nan) for r in reports])
        out.append({"row_metric": "rp_excl", "col_metric": col, "method": "pearson",
                    "r": cell.rho, "n": cell.n_samples,
                    "p_flag": "degenerate" if cell.degenerate else cell.p_flag})
    return out


def sweep(configs, out_dir=None, workers: int = 1) -> Path:
    """Run every config and write the aggregate CSVs into ``out_dir``.

    Outputs: ``results.csv``, ``coordination.csv``, ``correlations.csv``,
    ``pearson_traditional.csv``, ``plot_timing.csv``, ``plot_calt.csv`` and
    ``failures.csv`` (when any config failed).
    """
    configs = list(configs)
    if not configs:
        raise ValueError("sweep needs at least one config")
    root = Path(out_dir if out_dir is not None else results_root())
    runs = root / "runs"
    runs.mkdir(parents=True, exist_ok=True)
    jobs = [(c, runs) for c in configs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]

    reports = [rep for _, rep, err in results if err is None]
    failures = [{"slug": c.slug, "error": err} for c, _, err in results if err is not None]
    for f in failures:
        log.warning("config %s failed:\n%s", f["slug"], f["error"])

    write_csv(root / "results.csv", (r.to_row(METRIC_KEYS) for r in reports))
    write_csv(root / "coordination.csv", coordination_rows(reports),
              list(PROVENANCE_KEYS) + ["metric", "value_ql", "value_rand", "baseline_runs",
                                       "cs", "degenerate"])
    if len(reports) >= 3:
        write_csv(root / "correlations.csv", correlation_rows(reports),
                  ["row_metric", "col_metric", "rho", "ase", "n", "p_flag"])
        write_csv(root / "pearson_traditional.csv", traditional_pearson_rows(reports))
    write_csv(root / "plot_timing.csv",
              ({**{k: r.provenance.get(k) for k in PROVENANCE_KEYS},
                "time_rp": r.timings.get("rp"), "time_alt": r.timings.get("alt"),
                "time_classic": r.timings.get("classic")} for r in reports),
              list(PROVENANCE_KEYS) + ["time_rp", "time_alt", "time_classic"])
    write_csv(root / "plot_calt.csv",
              ({**{k: r.provenance.get(k) for k in PROVENANCE_KEYS},
                "calt": r.values.get("calt", math.nan), "rp_excl": r.values["rp_excl"],
                "reward_fairness": r.values["reward_fairness"]} for r in reports),
              list(PROVENANCE_KEYS) + ["calt", "rp_excl", "reward_fairness"])
    if failures:
        write_csv(root / "failures.csv", failures, ["slug", "error"])
    return root
