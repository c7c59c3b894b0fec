"""Command-line interface: dataset generation, single-instance solving, experiments, reports.

Exit codes: 0 success, 1 invalid flags or config, 2 IO or data errors.  All
randomness flows from explicit --seed flags; each run prints its resolved
configuration to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ansatz import QaoaParams, extract_solution
from .graphs import GraphFormatError, one_exchange_maxcut, read_graph
from .harness import (
    ExperimentConfig,
    aggregate,
    generate_dataset,
    read_records,
    run_matrix,
    write_report_csv,
)
from .optimize import METHODS, OptimizerConfig, optimize_qaoa

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1 here
        raise _UsageError(message)


def _print_config(name: str, config: dict) -> None:
    print(f"[{name}] config: {json.dumps(config, sort_keys=True)}", file=sys.stderr)


def _cmd_gen_dataset(args) -> int:
    config = ExperimentConfig(
        node_counts=args.nodes,
        graphs_per_count=args.count,
        edge_prob=args.edge_prob,
        master_seed=args.seed,
    )
    _print_config("gen-dataset", config.to_dict() | {"out": str(args.out)})
    written = generate_dataset(config, args.out)
    for n, count in written.items():
        print(f"wrote {count} graphs (n={n})")
    return EXIT_OK


def _cmd_solve_classical(args) -> int:
    g = read_graph(args.graph)
    _print_config("solve-classical", {"graph": str(args.graph), "seed": args.seed})
    result = one_exchange_maxcut(g, args.seed)
    print(json.dumps({"cut_value": result.cut_value, "partition": list(result.partition)}))
    return EXIT_OK


def _cmd_solve_qaoa(args) -> int:
    if args.p < 1:
        raise _UsageError(f"--p must be >= 1, got {args.p}")
    if args.shots < 1:
        raise _UsageError(f"--shots must be >= 1, got {args.shots}")
    g = read_graph(args.graph)
    _print_config("solve-qaoa", {
        "graph": str(args.graph), "p": args.p, "optimizer": args.optimizer,
        "shots": args.shots, "seed": args.seed, "restarts": args.restarts,
    })
    config = OptimizerConfig(method=args.optimizer, restarts=args.restarts, init_seed=args.seed)
    result = optimize_qaoa(g, args.p, config)
    params = QaoaParams.from_vector(result.best_params)
    solution = extract_solution(g, params, args.shots, args.seed)
    if args.params_out:
        params.save(args.params_out)
    # wall time is intentionally omitted: identical seeds must give identical stdout
    print(json.dumps({
        "n": g.n,
        "p": args.p,
        "optimizer": args.optimizer,
        "objective": result.best_value,
        "expected_cut": solution.expected_cut,
        "best_sampled": {
            "cut_value": solution.best_sampled.cut_value,
            "partition": list(solution.best_sampled.partition),
        },
        "most_probable": {
            "cut_value": solution.most_probable.cut_value,
            "partition": list(solution.most_probable.partition),
        },
        "params": params.to_dict(),
        "n_evals": result.n_evals,
        "n_grad_evals": result.n_grad_evals,
        "shots": args.shots,
    }))
    return EXIT_OK


def _cmd_run_experiment(args) -> int:
    try:
        config = ExperimentConfig.load(args.config)
    except FileNotFoundError:
        raise
    except (ValueError, TypeError) as exc:
        raise _UsageError(f"invalid config {args.config}: {exc}") from exc
    if args.workers is not None:
        config.parallelism = args.workers
    _print_config("run-experiment", config.to_dict() | {"out": str(args.out)})
    out = Path(args.out)
    dataset_dir = out / "dataset"
    generate_dataset(config, dataset_dir)
    records_path = out / "records.jsonl"
    records = run_matrix(config, dataset_dir, records_path)
    report_path = out / "report.csv"
    write_report_csv(aggregate(records), report_path)
    print(f"wrote {len(records)} records to {records_path}")
    print(f"wrote report to {report_path}")
    return EXIT_OK


def _cmd_report(args) -> int:
    records = read_records(args.records)
    if not records:
        raise _UsageError(f"no records in {args.records}")
    _print_config("report", {"records": str(args.records), "out": str(args.out)})
    rows = aggregate(records)
    write_report_csv(rows, args.out)
    print(f"wrote report to {args.out}")
    print(f"{'n':>4} {'optimizer':<12} {'p':>2} {'ratio_of_means':>15} {'mean_ratio':>11}")
    for r in rows:
        print(f"{r.n:>4} {r.optimizer:<12} {r.p:>2} {r.ratio_of_means:>15.4f} {r.mean_ratio:>11.4f}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="qaoa-maxcut", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen-dataset", help="generate a seeded random-graph dataset")
    p_gen.add_argument("--nodes", type=int, nargs="+", default=[10, 20])
    p_gen.add_argument("--count", type=int, default=100)
    p_gen.add_argument("--edge-prob", type=float, default=0.5)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_gen_dataset)

    p_cls = sub.add_parser("solve-classical", help="one-exchange local search on one graph")
    p_cls.add_argument("--graph", required=True)
    p_cls.add_argument("--seed", type=int, default=0)
    p_cls.set_defaults(func=_cmd_solve_classical)

    p_q = sub.add_parser("solve-qaoa", help="optimize and sample QAOA on one graph")
    p_q.add_argument("--graph", required=True)
    p_q.add_argument("--p", type=int, default=1)
    p_q.add_argument("--optimizer", choices=METHODS, default="bfgs")
    p_q.add_argument("--shots", type=int, default=1024)
    p_q.add_argument("--seed", type=int, default=0)
    p_q.add_argument("--restarts", type=int, default=1)
    p_q.add_argument("--params-out", default=None)
    p_q.set_defaults(func=_cmd_solve_qaoa)

    p_run = sub.add_parser("run-experiment", help="run the full experiment matrix")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--workers", type=int, default=None)
    p_run.set_defaults(func=_cmd_run_experiment)

    p_rep = sub.add_parser("report", help="aggregate a records file into the CSV report")
    p_rep.add_argument("--records", required=True)
    p_rep.add_argument("--out", required=True)
    p_rep.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
