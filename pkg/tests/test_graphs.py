import numpy as np
import pytest

from percolab.graphs import (
    MultiGraph,
    UnionFind,
    build_graph,
    component_vector,
    components,
    l2_distance,
    ord_pairs,
    read_edge_list,
    u0_distance,
    write_edge_list,
)

from oracles import dfs_components, naive_u0


def random_graph(rng, n_max=8):
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(0, 2 * n + 1))
    u = rng.integers(1, n + 1, size=m)
    v = rng.integers(1, n + 1, size=m)
    return MultiGraph(n, u, v)


class TestBuildGraph:
    def test_triangle_degrees(self):
        g = build_graph(3, [(1, 2), (2, 3), (1, 3)])
        assert g.degrees().tolist() == [2, 2, 2]

    def test_self_loop_counts_twice(self):
        g = build_graph(1, [(1, 1)])
        assert g.degrees().tolist() == [2]

    def test_multiplicity_preserved(self):
        g = build_graph(4, [(1, 2), (1, 2)])
        assert g.edge_count == 2
        assert g.degrees().tolist() == [2, 2, 0, 0]

    def test_endpoint_out_of_range(self):
        with pytest.raises(ValueError):
            build_graph(3, [(1, 4)])
        with pytest.raises(ValueError):
            build_graph(3, [(0, 2)])


class TestComponents:
    def test_triangle(self):
        g = build_graph(3, [(1, 2), (2, 3), (1, 3)])
        assert components(g).entries == [(3, 1)]

    def test_two_disjoint_edges(self):
        g = build_graph(4, [(1, 2), (3, 4)])
        assert components(g).entries == [(2, 0), (2, 0)]

    def test_matches_dfs_oracle_on_random_graphs(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            g = random_graph(rng)
            got = components(g).entries
            want = dfs_components(g.n, list(g.edge_pairs()))
            assert got == want

    def test_isolated_vertex_flag(self):
        g = build_graph(3, [(1, 2)])
        assert components(g).entries == [(2, 0), (1, 0)]
        assert components(g, include_isolated=False).entries == [(2, 0)]

    def test_self_loop_not_isolated(self):
        g = build_graph(2, [(1, 1)])
        dec = components(g, include_isolated=False)
        assert dec.entries == [(1, 1)]

    def test_tie_break_by_smallest_label(self):
        g = build_graph(4, [(3, 4), (1, 2)])
        assert components(g).reps.tolist() == [1, 3]

    def test_size_surplus_edge_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            g = random_graph(rng)
            dec = components(g)
            assert int(np.sum(dec.sizes - 1 + dec.surpluses)) == g.edge_count


class TestUnionFind:
    def test_sizes_and_max(self):
        uf = UnionFind(5)
        assert uf.union(1, 2)
        assert uf.union(2, 3)
        assert not uf.union(3, 1)
        assert uf.size[uf.find(1)] == 3
        assert uf.max_size == 3


class TestMetrics:
    def test_l2_identity(self):
        assert l2_distance([1.0, 0.5], [1.0, 0.5]) == 0.0

    def test_l2_unit(self):
        assert l2_distance([1.0], []) == 1.0

    def test_l2_345(self):
        assert l2_distance([3.0, 4.0], []) == pytest.approx(5.0)

    def test_u0_identity(self):
        a = ord_pairs([2.0, 1.0], [1, 0])
        assert u0_distance(a, a) == 0.0

    def test_u0_direct_evaluation(self):
        a = ord_pairs([2.0], [1])
        b = ord_pairs([2.0], [0])
        assert u0_distance(a, b) == pytest.approx(2.0)

    def test_u0_matches_naive_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            ka, kb = rng.integers(0, 5, size=2)
            xa = np.sort(rng.random(ka))[::-1]
            xb = np.sort(rng.random(kb))[::-1]
            ya = rng.integers(0, 4, size=ka)
            yb = rng.integers(0, 4, size=kb)
            a = ord_pairs(xa, ya)
            b = ord_pairs(xb, yb)
            want = naive_u0(a.pairs(), b.pairs())
            assert u0_distance(a, b) == pytest.approx(want, abs=1e-12)

    def test_u0_zero_iff_equal(self):
        a = ord_pairs([2.0, 1.0], [3, 1])
        b = ord_pairs([1.0, 2.0], [1, 3])
        c = ord_pairs([2.0, 1.0], [3, 2])
        assert u0_distance(a, b) == 0.0
        assert u0_distance(a, c) > 0.0


class TestOrd:
    def test_sorts_descending(self):
        v = ord_pairs([1.0, 3.0], [2, 0])
        assert v.pairs() == [(3.0, 0), (1.0, 2)]

    def test_tie_rule(self):
        v = ord_pairs([2.0, 2.0], [1, 5])
        assert v.pairs() == [(2.0, 5), (2.0, 1)]

    def test_idempotent_and_permutation(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.choice([0.5, 1.0, 2.0], size=6)
            y = np.where(x > 0, rng.integers(0, 3, size=6), 0)
            v = ord_pairs(x, y)
            again = ord_pairs(v.x, v.y)
            assert v.pairs() == again.pairs()
            assert sorted(v.pairs()) == sorted(zip(x.tolist(), y.tolist()))


class TestComponentVector:
    def test_rescaled_entries(self):
        g = build_graph(5, [(1, 2), (2, 3), (1, 3)])
        vec = component_vector(components(g), size_scale=0.5)
        assert vec.pairs()[0] == (1.5, 1)
        assert vec.x.tolist() == [1.5, 0.5, 0.5]


class TestEdgeListIO:
    def test_round_trip(self, tmp_path):
        g = build_graph(4, [(1, 2), (1, 2), (3, 3)])
        path = tmp_path / "g.edges"
        write_edge_list(g, path)
        h = read_edge_list(path)
        assert h.n == 4
        assert sorted(h.edge_pairs()) == sorted(g.edge_pairs())
        first = path.read_text().splitlines()[0]
        assert first == "4 3"

    def test_empty_graph(self, tmp_path):
        g = build_graph(2, [])
        path = tmp_path / "e.edges"
        write_edge_list(g, path)
        h = read_edge_list(path)
        assert h.n == 2 and h.edge_count == 0
