"""Command line front end.

Subcommands: generate, analyze, distances, hubpath, verify-lemmas,
experiment.  Every subcommand accepts --config (a JSON file whose keys are
ExperimentConfig fields) plus a handful of overriding flags; flags win over
the file.  Exit codes: 0 success, 1 invalid configuration, 2 runtime
failure, 3 verify-lemmas found a violated bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness
from .harness import ConfigError, ExperimentConfig

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_CHECK = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH",
                     help="JSON config file (keys = ExperimentConfig fields)")
    sub.add_argument("--seed", type=int, help="master seed")
    sub.add_argument("--out", metavar="DIR", help="output directory")
    sub.add_argument("--threads", type=int, help="worker processes")
    sub.add_argument("--format", choices=("json", "csv"),
                     help="report file format")
    sub.add_argument("-n", type=int, action="append", dest="n_values",
                     metavar="N", help="vertex count (repeatable)")
    sub.add_argument("--alpha", type=float, help="tail exponent in (0,1)")
    sub.add_argument("--c0", type=float, help="weight scale")
    sub.add_argument("--m", type=int, help="attribute pool size (default: m-rule)")
    sub.add_argument("--trials", type=int, help="trials per n")
    sub.add_argument("--epsilon", type=float, help="bound slack")
    sub.add_argument("--pairs", type=int, dest="pairs_per_trial",
                     help="sampled pairs / vertices per trial")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigkit",
        description="Power-law random intersection graphs: generation, "
                    "distances, hub navigation, bound verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample graphs and write graph files")
    _add_common(p)
    p.add_argument("--graph-format", choices=("binary", "json"),
                   dest="graph_format", help="graph file format")

    p = sub.add_parser("analyze", help="structure summary of one instance")
    _add_common(p)
    p.add_argument("--graph", metavar="PATH", help="existing graph file")

    p = sub.add_parser("distances", help="giant-pair distances vs the (2+eps) bound")
    _add_common(p)
    p.add_argument("--graph", metavar="PATH", help="existing graph file")
    p.add_argument("--trial", type=int, default=0, help="trial index")

    p = sub.add_parser("hubpath", help="hub distances and certificates")
    _add_common(p)
    p.add_argument("--graph", metavar="PATH", help="existing graph file")
    p.add_argument("--trial", type=int, default=0, help="trial index")

    p = sub.add_parser("verify-lemmas", help="run all bound suites")
    _add_common(p)

    p = sub.add_parser("experiment", help="full n-ladder with aggregation")
    _add_common(p)
    return parser


def _config_from(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
    else:
        cfg = ExperimentConfig(n_values=[1000])
    overrides = {
        "n_values": args.n_values,
        "alpha": args.alpha,
        "c0": args.c0,
        "m": args.m,
        "trials": args.trials,
        "epsilon": args.epsilon,
        "pairs_per_trial": args.pairs_per_trial,
        "seed": args.seed,
        "out_dir": args.out,
        "threads": args.threads,
        "format": args.format,
        "graph_format": getattr(args, "graph_format", None),
    }
    fields = {k: v for k, v in overrides.items() if v is not None}
    if fields:
        doc = cfg.to_dict()
        doc.update(fields)
        cfg = ExperimentConfig(**doc)
    return cfg


def _print_path(path: str) -> None:
    print(path)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "generate":
            metas = harness.run_generate(cfg)
            for meta in metas:
                print(os.path.join(cfg.out_dir, meta["path"]))
            return EXIT_OK

        if args.command == "analyze":
            frag = harness.run_analyze(cfg, graph_path=args.graph)
            path = harness.write_fragment(cfg, "analyze", frag)
            _print_path(path)
            return EXIT_OK

        if args.command == "distances":
            frag = harness.run_distances(cfg, trial=args.trial,
                                         graph_path=args.graph)
            path = harness.write_fragment(cfg, f"distances_n{frag['n']}_t{args.trial}",
                                          frag, harness.distances_rows)
            _print_path(path)
            return EXIT_OK

        if args.command == "hubpath":
            frag = harness.run_hubpath(cfg, trial=args.trial,
                                       graph_path=args.graph)
            path = harness.write_fragment(cfg, f"hubpath_n{frag['n']}_t{args.trial}",
                                          frag, harness.hubpath_rows)
            _print_path(path)
            return EXIT_OK

        if args.command == "verify-lemmas":
            reports = harness.run_verify(cfg)
            os.makedirs(cfg.out_dir, exist_ok=True)
            if cfg.format == "csv":
                path = os.path.join(cfg.out_dir, "verify_bounds.csv")
                harness.write_bound_reports(path, reports)
            else:
                path = os.path.join(cfg.out_dir, "verify_bounds.json")
                counts: dict = {}
                for rep in reports:
                    counts[rep.status] = counts.get(rep.status, 0) + 1
                harness.write_json_report(path, {
                    "kind": "verify",
                    "counts": counts,
                    "reports": [rep.to_dict() for rep in reports],
                })
            _print_path(path)
            failed = [rep for rep in reports if rep.status == "fail"]
            for rep in failed:
                print(f"FAIL {rep.bound_id} at {rep.params}: "
                      f"lhs={rep.lhs:.6g} rhs={rep.rhs:.6g}", file=sys.stderr)
            return EXIT_CHECK if failed else EXIT_OK

        if args.command == "experiment":
            report = harness.run_experiment(cfg)
            path = os.path.join(cfg.out_dir, "experiment_report.json")
            harness.write_json_report(path, report)
            _print_path(path)
            if cfg.format == "csv":
                agg = os.path.join(cfg.out_dir, "experiment_aggregates.csv")
                rows = []
                keys = ["n", "m", "l2n", "trials_ok", "trials_failed",
                        "rho_hat_min", "rho_hat_mean", "u_max_in_giant_freq",
                        "v0_in_giant_freq", "v0_threshold_freq",
                        "pair_pass_rate", "hub_pass_rate",
                        "escape_success_rate", "climb_success_rate"]
                for row in report["aggregates"]["per_n"]:
                    rows.append([row[k] for k in keys])
                harness._write_rows_csv(agg, keys, rows)
                _print_path(agg)
            return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError, OSError, json.JSONDecodeError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
