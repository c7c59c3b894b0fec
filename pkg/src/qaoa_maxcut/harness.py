"""Experiment matrix: dataset generation, per-graph runs, aggregation, reports.

Everything is a pure function of (config, dataset): per-task seeds derive
from the master seed, records stream to a JSON-lines file in a fixed task
order, and only wall-time fields differ between identical re-runs.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .ansatz import QaoaParams, extract_solution
from .graphs import Graph, one_exchange_maxcut, read_graph, write_graph, generate_erdos_renyi
from .optimize import OptimizerConfig, optimize_qaoa
from .seeding import derive_seed

log = logging.getLogger(__name__)


@dataclass
class ExperimentConfig:
    node_counts: list[int] = field(default_factory=lambda: [10, 20])
    graphs_per_count: int = 100
    edge_prob: float = 0.5
    depths: list[int] = field(default_factory=lambda: [1, 2, 3])
    optimizers: list[str] = field(default_factory=lambda: ["bfgs", "nelder-mead"])
    shots: int = 1024
    master_seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        if not self.node_counts or any(n < 1 for n in self.node_counts):
            raise ValueError("node_counts must be non-empty positive integers")
        if self.graphs_per_count < 1:
            raise ValueError("graphs_per_count must be positive")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError(f"edge_prob must lie in [0, 1], got {self.edge_prob}")
        if not self.depths or any(p < 1 for p in self.depths):
            raise ValueError("depths must be non-empty positive integers")
        if not self.optimizers:
            raise ValueError("optimizers must be non-empty")
        for m in self.optimizers:
            if m not in ("bfgs", "nelder-mead"):
                raise ValueError(f"unknown optimizer {m!r}")
        if self.shots < 1:
            raise ValueError("shots must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be positive")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class ExperimentRecord:
    graph_id: str
    n: int
    optimizer: str
    p: int
    qaoa_best_sampled: int
    qaoa_expected_cut: float
    classical_cut: int
    optimize_wall_seconds: float
    n_evals: int
    n_grad_evals: int
    final_params: dict
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


# Wall-clock fields excluded when comparing records for determinism.
WALL_TIME_FIELDS = ("optimize_wall_seconds",)


def dataset_graph_path(root, n: int, index: int) -> Path:
    return Path(root) / f"{n}nodes" / f"graph_{index:03d}.json"


def generate_dataset(config: ExperimentConfig, out_dir) -> dict[int, int]:
    """Write graphs_per_count seeded ER graphs per node count; returns counts per n."""
    out_dir = Path(out_dir)
    written: dict[int, int] = {}
    for n in config.node_counts:
        sub = out_dir / f"{n}nodes"
        sub.mkdir(parents=True, exist_ok=True)
        for i in range(config.graphs_per_count):
            seed = derive_seed(config.master_seed, n, i)
            g = generate_erdos_renyi(n, config.edge_prob, seed)
            write_graph(g, dataset_graph_path(out_dir, n, i))
        written[n] = config.graphs_per_count
    return written


def run_single(
    graph_id: str,
    g: Graph,
    optimizer: str,
    p: int,
    shots: int,
    seed: int,
) -> ExperimentRecord:
    """One QAOA optimization plus the classical baseline on one graph.

    Wall time covers the optimization loop only; optimizer failure is
    recorded in the error field, never raised.
    """
    opt_config = OptimizerConfig(
        method=optimizer,
        init_seed=derive_seed(seed, "init"),
    )
    try:
        result = optimize_qaoa(g, p, opt_config)
        params = QaoaParams.from_vector(result.best_params)
        solution = extract_solution(g, params, shots, derive_seed(seed, "sample"))
        classical = one_exchange_maxcut(g, derive_seed(seed, "classical"))
        return ExperimentRecord(
            graph_id=graph_id,
            n=g.n,
            optimizer=optimizer,
            p=p,
            qaoa_best_sampled=solution.best_sampled.cut_value,
            qaoa_expected_cut=float(solution.expected_cut),
            classical_cut=classical.cut_value,
            optimize_wall_seconds=float(result.wall_time_seconds),
            n_evals=result.n_evals,
            n_grad_evals=result.n_grad_evals,
            final_params=params.to_dict(),
            error=None if result.success else result.message,
        )
    except Exception as exc:  # batch must survive individual failures
        log.warning("task %s %s p=%d failed: %s", graph_id, optimizer, p, exc)
        return ExperimentRecord(
            graph_id=graph_id,
            n=g.n,
            optimizer=optimizer,
            p=p,
            qaoa_best_sampled=0,
            qaoa_expected_cut=0.0,
            classical_cut=0,
            optimize_wall_seconds=0.0,
            n_evals=0,
            n_grad_evals=0,
            final_params={},
            error=f"{type(exc).__name__}: {exc}",
        )


def _run_task(task: tuple) -> ExperimentRecord:
    graph_id, g, optimizer, p, shots, seed = task
    return run_single(graph_id, g, optimizer, p, shots, seed)


def _build_tasks(config: ExperimentConfig, dataset_dir) -> list[tuple]:
    tasks = []
    for n in config.node_counts:
        for i in range(config.graphs_per_count):
            path = dataset_graph_path(dataset_dir, n, i)
            g = read_graph(path)
            graph_id = f"{n}nodes/graph_{i:03d}"
            for optimizer in config.optimizers:
                for p in config.depths:
                    seed = derive_seed(config.master_seed, "run", n, i, optimizer, p)
                    tasks.append((graph_id, g, optimizer, p, config.shots, seed))
    return tasks


def run_matrix(config: ExperimentConfig, dataset_dir, records_path) -> list[ExperimentRecord]:
    """Run the full graph x optimizer x depth cross product.

    Records stream to records_path (one JSON object per line) in fixed task
    order, so identical configs reproduce identical files up to wall times,
    independent of the worker count.
    """
    tasks = _build_tasks(config, dataset_dir)
    records: list[ExperimentRecord] = []
    records_path = Path(records_path)
    records_path.parent.mkdir(parents=True, exist_ok=True)
    with open(records_path, "w", encoding="utf-8") as fh:
        if config.parallelism == 1:
            results: Iterable[ExperimentRecord] = map(_run_task, tasks)
            for rec in results:
                fh.write(json.dumps(rec.to_dict()) + "\n")
                fh.flush()
                records.append(rec)
        else:
            with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
                for rec in pool.map(_run_task, tasks, chunksize=1):
                    fh.write(json.dumps(rec.to_dict()) + "\n")
                    fh.flush()
                    records.append(rec)
    return records


def read_records(path) -> list[ExperimentRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(ExperimentRecord(**json.loads(line)))
            except (json.JSONDecodeError, TypeError) as exc:
                raise ValueError(f"{path}:{line_no}: bad record: {exc}") from exc
    return records


@dataclass
class AggregateRow:
    n: int
    optimizer: str
    p: int
    mean_qaoa_cut: float
    std_qaoa_cut: float
    mean_classical_cut: float
    ratio_of_means: float
    mean_ratio: float
    mean_runtime_s: float
    std_runtime_s: float


def aggregate(records: list[ExperimentRecord]) -> list[AggregateRow]:
    """Per-(n, optimizer, p) cell statistics.

    The headline ratio is ratio-of-means: mean(QAOA best-sampled) over
    mean(classical cut); mean-of-ratios is a secondary column.  Sample
    standard deviations use the n-1 denominator (0 for single records).
    """
    if not records:
        raise ValueError("no records to aggregate")
    cells: dict[tuple[int, str, int], list[ExperimentRecord]] = {}
    for rec in records:
        if rec.error is not None and rec.n_evals == 0:
            log.warning("skipping failed record %s %s p=%d", rec.graph_id, rec.optimizer, rec.p)
            continue
        cells.setdefault((rec.n, rec.optimizer, rec.p), []).append(rec)

    rows = []
    for (n, optimizer, p) in sorted(cells):
        group = cells[(n, optimizer, p)]
        qaoa = [r.qaoa_best_sampled for r in group]
        classical = [r.classical_cut for r in group]
        runtimes = [r.optimize_wall_seconds for r in group]
        mean_qaoa = statistics.fmean(qaoa)
        mean_classical = statistics.fmean(classical)
        if mean_classical > 0:
            ratio_of_means = mean_qaoa / mean_classical
        else:
            log.warning("cell n=%d %s p=%d has zero mean classical cut", n, optimizer, p)
            ratio_of_means = float("nan")
        pair_ratios = [q / c for q, c in zip(qaoa, classical) if c > 0]
        mean_ratio = statistics.fmean(pair_ratios) if pair_ratios else float("nan")
        rows.append(
            AggregateRow(
                n=n,
                optimizer=optimizer,
                p=p,
                mean_qaoa_cut=mean_qaoa,
                std_qaoa_cut=statistics.stdev(qaoa) if len(qaoa) > 1 else 0.0,
                mean_classical_cut=mean_classical,
                ratio_of_means=ratio_of_means,
                mean_ratio=mean_ratio,
                mean_runtime_s=statistics.fmean(runtimes),
                std_runtime_s=statistics.stdev(runtimes) if len(runtimes) > 1 else 0.0,
            )
        )
    return rows


REPORT_HEADER = [
    "n", "optimizer", "p",
    "mean_qaoa_cut", "std_qaoa_cut", "mean_classical_cut",
    "ratio_of_means", "mean_ratio", "mean_runtime_s", "std_runtime_s",
]


def write_report_csv(rows: list[AggregateRow], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_HEADER)
        for r in rows:
            writer.writerow([
                r.n, r.optimizer, r.p,
                f"{r.mean_qaoa_cut:.6f}", f"{r.std_qaoa_cut:.6f}",
                f"{r.mean_classical_cut:.6f}",
                f"{r.ratio_of_means:.6f}", f"{r.mean_ratio:.6f}",
                f"{r.mean_runtime_s:.6f}", f"{r.std_runtime_s:.6f}",
            ])
