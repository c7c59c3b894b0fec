import itertools
import json
import math

import numpy as np
import pytest

from qaoa_maxcut.graphs import (
    CutResult,
    Graph,
    GraphFormatError,
    brute_force_maxcut,
    cut_value,
    generate_erdos_renyi,
    one_exchange_maxcut,
    read_graph,
    write_graph,
)

K3 = Graph(3, ((0, 1), (0, 2), (1, 2)))
PATH3 = Graph(3, ((0, 1), (1, 2)))
C4 = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


def enumerate_maxcut(g):
    """Independent oracle: plain enumeration of every bipartition."""
    best = 0
    for bits in itertools.product((0, 1), repeat=g.n):
        best = max(best, cut_value(g, bits))
    return best


class TestGraphType:
    def test_canonical_edge_order(self):
        g = Graph(4, ((2, 3), (1, 0), (0, 2)))
        assert g.edges == ((0, 1), (0, 2), (2, 3))

    def test_rejects_self_loop(self):
        with pytest.raises(GraphFormatError, match="self-loop"):
            Graph(3, ((0, 0),))

    def test_rejects_duplicate_edge(self):
        with pytest.raises(GraphFormatError, match="duplicate"):
            Graph(3, ((0, 1), (1, 0)))

    def test_rejects_out_of_range_endpoint(self):
        with pytest.raises(GraphFormatError, match="out of range"):
            Graph(3, ((0, 3),))

    def test_rejects_nonpositive_n(self):
        with pytest.raises(GraphFormatError):
            Graph(0, ())


class TestErdosRenyi:
    def test_zero_probability_gives_empty_graph(self):
        assert generate_erdos_renyi(10, 0.0, 1).n_edges == 0

    def test_unit_probability_gives_complete_graph(self):
        assert generate_erdos_renyi(10, 1.0, 1).n_edges == 45

    def test_deterministic_under_fixed_seed(self):
        a = generate_erdos_renyi(10, 0.5, 42)
        b = generate_erdos_renyi(10, 0.5, 42)
        assert a == b

    def test_different_seeds_differ(self):
        a = generate_erdos_renyi(12, 0.5, 1)
        b = generate_erdos_renyi(12, 0.5, 2)
        assert a.edges != b.edges

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            generate_erdos_renyi(5, 1.5, 0)
        with pytest.raises(ValueError):
            generate_erdos_renyi(5, -0.1, 0)

    def test_mean_edge_count_binomial(self):
        # 45 trials at p=0.5 per graph; 1000 seeds, 3 sigma band on the mean
        counts = [generate_erdos_renyi(10, 0.5, s).n_edges for s in range(1000)]
        mean = np.mean(counts)
        sigma = math.sqrt(45 * 0.25)
        assert 22.5 - 3 * sigma <= mean <= 22.5 + 3 * sigma


class TestCutValue:
    def test_k3_all_same_side(self):
        assert cut_value(K3, (0, 0, 0)) == 0

    def test_k3_isolated_vertex(self):
        assert cut_value(K3, (0, 0, 1)) == 2

    def test_path_alternating(self):
        assert cut_value(PATH3, (0, 1, 0)) == 2

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cut_value(K3, (0, 1))

    def test_complement_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            g = generate_erdos_renyi(8, 0.5, int(rng.integers(1 << 31)))
            part = tuple(rng.integers(0, 2, 8))
            comp = tuple(1 - b for b in part)
            assert cut_value(g, part) == cut_value(g, comp)


class TestBruteForce:
    def test_single_edge(self):
        assert brute_force_maxcut(Graph(2, ((0, 1),))).cut_value == 1

    def test_k3(self):
        assert brute_force_maxcut(K3).cut_value == enumerate_maxcut(K3) == 2

    def test_four_cycle(self):
        assert brute_force_maxcut(C4).cut_value == enumerate_maxcut(C4) == 4

    def test_matches_enumeration_on_random_graphs(self):
        for seed in range(20):
            g = generate_erdos_renyi(7, 0.5, seed)
            assert brute_force_maxcut(g).cut_value == enumerate_maxcut(g)

    def test_partition_consistent(self):
        res = brute_force_maxcut(C4)
        assert cut_value(C4, res.partition) == res.cut_value
        assert res.partition[0] == 0

    def test_size_guard(self):
        with pytest.raises(ValueError, match="too large for oracle"):
            brute_force_maxcut(Graph(25, ()))

    def test_tie_break_smallest_assignment(self):
        g = Graph(2, ())  # every partition cuts 0; smallest assignment wins
        assert brute_force_maxcut(g).partition == (0, 0)


def local_optimality_holds(g, part):
    """Per-vertex predicate: cut incident edges >= uncut incident edges."""
    for v in range(g.n):
        inc = [(u, w) for u, w in g.edges if v in (u, w)]
        cut_inc = sum(1 for u, w in inc if part[u] != part[w])
        if cut_inc < len(inc) - cut_inc:
            return False
    return True


class TestOneExchange:
    def test_k3_any_seed(self):
        for seed in range(10):
            assert one_exchange_maxcut(K3, seed).cut_value == 2

    def test_empty_graph(self):
        assert one_exchange_maxcut(Graph(4, ()), 0).cut_value == 0

    def test_four_cycle_lower_bound(self):
        for seed in range(10):
            assert one_exchange_maxcut(C4, seed).cut_value >= 2

    def test_zeros_start_deterministic(self):
        a = one_exchange_maxcut(C4, 0, start="zeros")
        b = one_exchange_maxcut(C4, 99, start="zeros")
        assert a == b

    def test_local_optimality_on_random_graphs(self):
        for seed in range(20):
            g = generate_erdos_renyi(10, 0.5, seed)
            res = one_exchange_maxcut(g, seed + 1000)
            assert local_optimality_holds(g, res.partition)
            assert res.cut_value <= brute_force_maxcut(g).cut_value <= g.n_edges

    def test_result_is_consistent(self):
        g = generate_erdos_renyi(9, 0.4, 3)
        res = one_exchange_maxcut(g, 5)
        assert cut_value(g, res.partition) == res.cut_value


class TestGraphIO:
    def test_canonical_bytes(self, tmp_path):
        path = tmp_path / "k3.json"
        write_graph(K3, path)
        assert path.read_text() == '{"n":3,"edges":[[0,1],[0,2],[1,2]],"seed":null}\n'

    def test_round_trip(self, tmp_path):
        g = generate_erdos_renyi(12, 0.5, 77)
        path = tmp_path / "g.json"
        write_graph(g, path)
        assert read_graph(path) == g

    def test_self_loop_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n":2,"edges":[[0,0]]}')
        with pytest.raises(GraphFormatError, match="self-loop"):
            read_graph(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(GraphFormatError, match="invalid JSON"):
            read_graph(path)

    def test_error_reports_location(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n":2,"edges":[[0,5]]}')
        with pytest.raises(GraphFormatError, match=str(path)):
            read_graph(path)
