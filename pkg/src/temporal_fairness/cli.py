"""Command line entry point: ``tfl <subcommand>``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .harness.bench import bench_metrics, speedup
from .harness.config import ExperimentConfig, episode_budget, load_configs, paper_grid, results_root
from .harness.runner import (
    METRIC_KEYS,
    correlation_rows,
    read_csv_rows,
    run_experiment,
    sweep,
    write_csv,
)
from .log import EpisodeLog
from .metrics import RpWeights, compute_metrics
from .report import MetricReport


def _simulate(args):
    config = ExperimentConfig.load(args.config)
    if args.seed is not None:
        config = config.with_(seed=args.seed)
    out = Path(args.out) if args.out else results_root()
    episode_log, report = run_experiment(config, out)
    print(json.dumps({"run_dir": str(out / config.slug), "episodes": len(episode_log),
                      **{k: report.values.get(k) for k in ("efficiency", "reward_fairness",
                                                           "calt", "rp_excl")}}, indent=2))


def _metrics(args):
    episode_log = EpisodeLog.read_csv(args.log)
    weights = RpWeights(args.alpha, args.beta)
    values, flags, timings = compute_metrics(episode_log, weights, args.priorities, args.r_high)
    report = MetricReport(values, {"n": episode_log.n, "episodes": len(episode_log),
                                   "source": str(args.log)}, flags, timings)
    if args.out:
        report.write_json(args.out)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))


def _bench(args):
    rows = []
    for n in args.n:
        episodes = args.episodes or episode_budget(n, formula_only=args.formula_only)
        records = bench_metrics(n, episodes, args.trials, args.seed)
        for r in records:
            rows.append(r.to_dict())
        print(f"n={n:>3} episodes={episodes:>8}  "
              + "  ".join(f"{r.family}={r.wall_seconds:.4f}s" for r in records)
              + f"  ALT/RP={speedup(records):.1f}x")
    if args.out:
        write_csv(args.out, rows, ["family", "wall_seconds", "n", "episodes", "machine"])


def _sweep(args):
    if args.paper_grid:
        ns = [n for n in (2, 3, 5, 8, 10) if n <= args.max_n]
        configs = []
        for seed in args.seeds:
            configs.extend(c.with_(formula_only=args.formula_only)
                           for c in paper_grid(seed, ns, args.episodes))
    elif args.configs:
        configs = load_configs(args.configs)
    else:
        raise SystemExit("sweep needs a config list JSON or --paper-grid")
    root = sweep(configs, args.out, workers=args.workers)
    print(f"{len(configs)} configs -> {root}")


def _correlate(args):
    rows = read_csv_rows(args.results)
    reports = [{k: v for k, v in row.items() if k in METRIC_KEYS} for row in rows]
    out = correlation_rows(reports)
    target = Path(args.out) if args.out else Path(args.results).with_name("correlations.csv")
    write_csv(target, out, ["row_metric", "col_metric", "rho", "ase", "n", "p_flag"])
    for row in out:
        rho = "nan" if math.isnan(row["rho"]) else f"{row['rho']:+.3f}"
        print(f"{row['row_metric']:>12} vs {row['col_metric']:<5} rho={rho} {row['p_flag']}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tfl", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one config, write log and report")
    p.add_argument("config", help="ExperimentConfig JSON file")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", help="results root (default $TFL_RESULTS_DIR or ./results)")
    p.set_defaults(func=_simulate)

    p = sub.add_parser("metrics", help="recompute metrics from a stored log CSV")
    p.add_argument("log")
    p.add_argument("--alpha", type=float, default=1.0, help="RS weight")
    p.add_argument("--beta", type=float, default=1.0, help="WPE weight")
    p.add_argument("--priorities", type=float, nargs="+", help="target shares for ERP")
    p.add_argument("--r-high", type=float, default=100.0)
    p.add_argument("--out", help="write the report JSON here")
    p.set_defaults(func=_metrics)

    p = sub.add_parser("bench", help="time RP against ALT")
    p.add_argument("--n", type=int, nargs="+", default=[2, 3, 5, 8, 10])
    p.add_argument("--episodes", type=int, help="fixed episode count (default: budget per n)")
    p.add_argument("--formula-only", action="store_true",
                   help="use the scaling formula for every n, no published overrides")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write timing records CSV")
    p.set_defaults(func=_bench)

    p = sub.add_parser("sweep", help="run a list of configs and aggregate")
    p.add_argument("configs", nargs="?", help="JSON list of ExperimentConfig objects")
    p.add_argument("--paper-grid", action="store_true",
                   help="the 30-run grid (20 Q-learning + 10 random) per seed")
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--episodes", type=int, help="episode override for every run")
    p.add_argument("--formula-only", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="results directory (default $TFL_RESULTS_DIR or ./results)")
    p.set_defaults(func=_sweep)

    p = sub.add_parser("correlate", help="Spearman table from a results CSV")
    p.add_argument("results")
    p.add_argument("--out")
    p.set_defaults(func=_correlate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
