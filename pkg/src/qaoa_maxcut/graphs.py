"""Undirected unweighted graphs, random instances, cut arithmetic and classical MaxCut.

Partitions are sequences of bits, one per vertex; bit b_v selects the subset
of vertex v.  As an integer, a partition is sum(b_v << v) (vertex v = bit v),
matching the little-endian qubit convention of the statevector module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

BRUTE_FORCE_MAX_VERTICES = 24


class GraphFormatError(ValueError):
    """Raised when a graph file is malformed or violates graph invariants."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected unweighted graph on vertices 0..n-1.

    Edges are stored canonically: u < v within each pair, pairs sorted
    lexicographically.  Immutable and safe to share.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    seed: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError(f"vertex count must be positive, got {self.n}")
        canon = []
        for e in self.edges:
            if len(e) != 2:
                raise GraphFormatError(f"edge {e!r} is not a pair")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphFormatError(f"self-loop ({u},{v}) not allowed")
            if u > v:
                u, v = v, u
            if not (0 <= u < v < self.n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={self.n}")
            canon.append((u, v))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise GraphFormatError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for u, w in self.edges if u == v or w == v)


@dataclass(frozen=True)
class CutResult:
    partition: tuple[int, ...]
    cut_value: int


def generate_erdos_renyi(n: int, edge_prob: float, seed: int) -> Graph:
    """Sample G(n, edge_prob): each of the C(n,2) edges independently.

    Pairs are visited in canonical order with one PCG64 draw per pair, so
    identical (n, edge_prob, seed) always yields the identical graph.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    rng = np.random.Generator(np.random.PCG64(seed))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_prob:
                edges.append((u, v))
    return Graph(n=n, edges=tuple(edges), seed=int(seed))


def cut_value(g: Graph, partition: Sequence[int]) -> int:
    """Number of edges whose endpoints lie in different subsets."""
    if len(partition) != g.n:
        raise ValueError(f"partition length {len(partition)} != vertex count {g.n}")
    return sum(1 for u, v in g.edges if partition[u] != partition[v])


def _partition_from_int(bits: int, n: int) -> tuple[int, ...]:
    return tuple((bits >> v) & 1 for v in range(n))


def brute_force_maxcut(g: Graph) -> CutResult:
    """Exact MaxCut by enumerating all 2^(n-1) distinct bipartitions.

    Vertex 0 is fixed to subset 0 (global flip symmetry); ties break toward
    the smallest assignment interpreted as an integer.
    """
    if g.n > BRUTE_FORCE_MAX_VERTICES:
        raise ValueError(
            f"instance too large for oracle: n={g.n} > {BRUTE_FORCE_MAX_VERTICES}"
        )
    m = 1 << (g.n - 1)
    # assignment integer = half-index shifted past the fixed vertex 0
    idx = np.arange(m, dtype=np.int64) << 1
    cuts = np.zeros(m, dtype=np.int64)
    for u, v in g.edges:
        cuts += ((idx >> u) ^ (idx >> v)) & 1
    best = int(np.argmax(cuts))  # first maximum = smallest assignment
    return CutResult(
        partition=_partition_from_int(best << 1, g.n),
        cut_value=int(cuts[best]),
    )


def one_exchange_maxcut(g: Graph, seed: int, start: str = "random") -> CutResult:
    """Greedy local search with the one-exchange heuristic.

    Starts from a seeded uniform-random partition (or all-zeros with
    start="zeros"); repeatedly flips the vertex with the largest strictly
    positive cut gain, lowest index on ties, until no flip improves the cut.
    """
    if start == "random":
        rng = np.random.Generator(np.random.PCG64(seed))
        part = rng.integers(0, 2, size=g.n, dtype=np.int64)
    elif start == "zeros":
        part = np.zeros(g.n, dtype=np.int64)
    else:
        raise ValueError(f"unknown start {start!r}")

    neighbors: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)

    while True:
        best_gain = 0
        best_vertex = -1
        for v in range(g.n):
            cut_inc = sum(1 for w in neighbors[v] if part[w] != part[v])
            gain = len(neighbors[v]) - 2 * cut_inc  # uncut incident - cut incident
            if gain > best_gain:
                best_gain = gain
                best_vertex = v
        if best_vertex < 0:
            break
        part[best_vertex] ^= 1

    part_t = tuple(int(b) for b in part)
    return CutResult(partition=part_t, cut_value=cut_value(g, part_t))


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges], "seed": g.seed}


def graph_from_dict(data: dict, where: str = "<graph>") -> Graph:
    if not isinstance(data, dict):
        raise GraphFormatError(f"{where}: expected a JSON object")
    for key in ("n", "edges"):
        if key not in data:
            raise GraphFormatError(f"{where}: missing field {key!r}")
    try:
        return Graph(
            n=int(data["n"]),
            edges=tuple(tuple(e) for e in data["edges"]),
            seed=None if data.get("seed") is None else int(data["seed"]),
        )
    except GraphFormatError as exc:
        raise GraphFormatError(f"{where}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise GraphFormatError(f"{where}: malformed graph data: {exc}") from exc


def write_graph(g: Graph, path) -> None:
    """Write the canonical JSON form; byte-identical for equal graphs."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(graph_to_dict(g), separators=(",", ":")))
        fh.write("\n")


def read_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"{path}: invalid JSON: {exc}") from exc
    return graph_from_dict(data, where=str(path))
