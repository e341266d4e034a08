from collections import Counter

import numpy as np
import pytest

from percolab.degrees import DegreeSequence
from percolab.exploration import (
    _explore,
    component_stats_from_trace,
    drift_estimate,
    explore_cm,
    incremental_process_check,
    rescaled_path,
    rewritten_process_check,
    surplus_from_trace,
    write_trace_csv,
)
from percolab.graphs import components

from oracles import dfs_components


def random_degree_sequence(rng, n_max=8):
    n = int(rng.integers(1, n_max + 1))
    d = rng.integers(1, 5, size=n)
    if d.sum() % 2:
        d[0] += 1
    return DegreeSequence(d)


class TestExploreBasics:
    def test_single_edge(self):
        trace, g = explore_cm(DegreeSequence([1, 1]), np.random.default_rng(0))
        assert trace.n_components == 1
        sizes, surplus, edges = component_stats_from_trace(trace)
        assert sizes.tolist() == [2]
        assert surplus.tolist() == [0]
        assert edges.tolist() == [1]
        assert g.edge_count == 1

    def test_walk_invariants(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            d = random_degree_sequence(rng)
            trace, g = explore_cm(d, rng)
            # increments and boundary structure
            assert incremental_process_check(trace)
            assert trace.S[-1] == -2 * trace.n_components
            for k, tau in enumerate(trace.boundaries, start=1):
                assert trace.S[tau - 1] == -2 * k
                lo = trace.boundaries[k - 2] if k >= 2 else 0
                assert np.all(trace.S[lo:tau - 1] > -2 * k)
            # half-edge conservation: total pairings = ell / 2
            _, _, edges = component_stats_from_trace(trace)
            assert int(edges.sum()) == d.ell // 2
            assert g.edge_count == d.ell // 2

    def test_trace_matches_union_find_decomposition(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            d = random_degree_sequence(rng)
            trace, g = explore_cm(d, rng)
            sizes, surplus, _ = component_stats_from_trace(trace)
            got = sorted(zip(sizes.tolist(), surplus.tolist()))
            want = sorted(components(g).entries)
            assert got == want

    def test_edge_counts_match_realized_components(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            d = random_degree_sequence(rng)
            trace, g = explore_cm(d, rng)
            sizes, surplus, edges = component_stats_from_trace(trace)
            assert np.all(edges == sizes - 1 + surplus)
            dec = components(g)
            assert sorted((dec.sizes - 1 + dec.surpluses).tolist()) == sorted(edges.tolist())

    def test_realized_degrees(self):
        d = DegreeSequence([3, 2, 2, 1])
        _, g = explore_cm(d, np.random.default_rng(5))
        assert np.array_equal(g.degrees(), d.d)

    def test_odd_total_rejected(self):
        with pytest.raises(ValueError):
            explore_cm(DegreeSequence([1, 1, 1]), np.random.default_rng(0))


class TestSurplus:
    def test_tree_components_zero(self):
        trace, g = explore_cm(DegreeSequence([1, 1, 1, 1]), np.random.default_rng(4))
        assert np.all(surplus_from_trace(trace) == 0)

    def test_triangle(self):
        # force the triangle by trying seeds until the realized graph is one
        d = DegreeSequence([2, 2, 2])
        for seed in range(50):
            trace, g = explore_cm(d, np.random.default_rng(seed))
            if components(g).entries == [(3, 1)]:
                assert surplus_from_trace(trace).tolist() == [1]
                break
        else:
            pytest.fail("triangle never realized")

    def test_matches_oracle_surplus(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            d = random_degree_sequence(rng)
            trace, g = explore_cm(d, rng)
            want = sorted(sp for _, sp in dfs_components(g.n, list(g.edge_pairs())))
            assert sorted(surplus_from_trace(trace).tolist()) == want


class TestProcessIdentities:
    def test_rewritten_form_holds(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            d = random_degree_sequence(rng)
            trace, _ = explore_cm(d, rng)
            assert rewritten_process_check(trace, d)

    def test_corrupted_trace_fails(self):
        d = DegreeSequence([2, 2, 2, 2])
        trace, _ = explore_cm(d, np.random.default_rng(8))
        bad_j = trace.J.copy()
        flip = int(np.nonzero(bad_j == 1)[0][1])  # flip a discovery step
        bad_j[flip] = 0
        from dataclasses import replace
        corrupted = replace(trace, J=bad_j)
        assert not rewritten_process_check(corrupted, d)
        assert not incremental_process_check(corrupted)


class _EnumChooser:
    """Replays a fixed index path; used to walk the full decision tree."""

    def __init__(self, path):
        self.path = path
        self.i = 0
        self.branch_sizes = []

    def pick(self, k):
        self.branch_sizes.append(k)
        if self.i < len(self.path):
            choice = self.path[self.i]
        else:
            choice = 0
            self.path.append(0)
        self.i += 1
        return choice


def enumerate_matching_law(dlist):
    """Exact matching distribution of the exploration, by decision-tree walk.

    Every pick of the chooser is uniform over its range, so a path's
    probability is the product of 1/branch_size along it.
    """
    law = Counter()
    stack = [[]]
    while stack:
        path = stack.pop()
        chooser = _EnumChooser(list(path))
        _, (eu, ev) = _explore(np.asarray(dlist), chooser)
        prob = 1.0
        for k in chooser.branch_sizes:
            prob /= k
        key = tuple(sorted(tuple(sorted(p)) for p in zip(eu, ev)))
        law[key] += prob
        # each depth newly extended with choice 0 owns all its siblings
        for depth in range(len(path), len(chooser.path)):
            for sibling in range(1, chooser.branch_sizes[depth]):
                stack.append(chooser.path[:depth] + [sibling])
    return law


class TestMatchingLaw:
    @pytest.mark.parametrize("dlist", [[1, 1], [2, 1, 1], [2, 2, 1, 1], [3, 2, 2, 1]])
    def test_exploration_matching_is_uniform(self, dlist):
        # vertex-pair multiset law must match the one induced by the uniform
        # matching; enumerate the walk's decision tree exactly
        law = enumerate_matching_law(dlist)
        assert sum(law.values()) == pytest.approx(1.0, abs=1e-12)
        # group half-edge-level paths by realized labeled edge multiset and
        # compare to the uniform-matching law computed by brute force
        from percolab.percolation import _matchings
        base = [v + 1 for v, dv in enumerate(dlist) for _ in range(dv)]
        want = Counter()
        matchings = list(_matchings(base))
        for matching in matchings:
            key = tuple(sorted(tuple(sorted((base[a], base[b]))) for a, b in matching))
            want[key] += 1.0 / len(matchings)
        assert set(law) == set(want)
        for key in want:
            assert law[key] == pytest.approx(want[key], abs=1e-12)


class TestDiscoveryLaw:
    def test_discovery_order_is_size_biased(self):
        # the sequence of discovered vertices follows the size-biased
        # reordering; chi-square on the first discovered vertex
        d = DegreeSequence([3, 2, 1, 2])
        rng = np.random.default_rng(9)
        trials = 40_000
        counts = Counter()
        for _ in range(trials):
            trace, _ = explore_cm(d, rng)
            counts[int(trace.vertex[0])] += 1
        chi2 = 0.0
        for v in range(1, 5):
            want = trials * d.d[v - 1] / d.ell
            chi2 += (counts[v] - want) ** 2 / want
        assert chi2 < 16.3  # dof 3, 0.999 quantile


class TestRescaledPath:
    def test_identity_scales(self):
        d = DegreeSequence([2, 2, 1, 1])
        trace, _ = explore_cm(d, np.random.default_rng(10))
        p = rescaled_path(trace, 1.0, 1.0)
        assert p.values[0] == 0.0
        assert np.array_equal(p.values[1:], trace.S.astype(float))
        assert p.dt == 1.0

    def test_diffusive_scales(self):
        d = DegreeSequence([3] * 64)
        trace, _ = explore_cm(d, np.random.default_rng(11))
        n = 64
        p = rescaled_path(trace, n ** (2 / 3), n ** (1 / 3))
        assert p.dt == pytest.approx(n ** (-2 / 3))
        assert p.values[5] == pytest.approx(trace.S[4] / n ** (1 / 3))

    def test_heavy_scales(self):
        # time b_n, space a_n
        n, tau = 128, 3.5
        a_n, b_n = n ** (1 / (tau - 1)), n ** ((tau - 2) / (tau - 1))
        d = DegreeSequence([3] * n)
        trace, _ = explore_cm(d, np.random.default_rng(12))
        p = rescaled_path(trace, b_n, a_n)
        assert p.dt == pytest.approx(1.0 / b_n)
        assert p.values[1] == pytest.approx(trace.S[0] / a_n)


class TestDriftEstimate:
    def test_regular_degrees_deterministic(self):
        d = DegreeSequence([4] * 100)
        est = drift_estimate(d, [0.1, 0.5], replicas=8, rng=np.random.default_rng(0))
        assert np.all(est.mean == 2.0)  # d - 2 = 2 everywhere
        assert np.all(est.stderr == 0.0)

    def test_critical_t0_mean(self):
        # at t ~ 0 the size-biased mean is nu_n + 1, so mean(d - 2) = nu_n - 1
        rng = np.random.default_rng(13)
        d = DegreeSequence(np.concatenate([np.full(600, 1), np.full(400, 3)]))
        est = drift_estimate(d, [1e-9], replicas=3000, rng=rng)
        want = d.nu - 1.0
        assert abs(est.mean[0] - want) < 4 * est.stderr[0] + 1e-12
        assert est.predicted[0] == pytest.approx(want)

    def test_negative_slope_when_third_moment_dominates(self):
        # sigma3 > 2 sigma2 makes the predicted drift decrease in t, and the
        # Monte Carlo mean should follow
        rng = np.random.default_rng(14)
        d = DegreeSequence(np.concatenate([np.full(900, 1), np.full(100, 8)]))
        sigma2 = float(np.mean(d.d.astype(float) ** 2))
        sigma3 = float(np.mean(d.d.astype(float) ** 3))
        assert sigma3 > 2 * sigma2
        est = drift_estimate(d, [0.05, 2.0], replicas=4000, rng=rng)
        assert est.predicted[1] < est.predicted[0]
        assert est.mean[1] < est.mean[0]


class TestTraceCsv:
    def test_columns(self, tmp_path):
        trace, _ = explore_cm(DegreeSequence([2, 2, 1, 1]), np.random.default_rng(1))
        path = tmp_path / "trace.csv"
        write_trace_csv(trace, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "l,S,J,d_new,surplus_mark"
        assert len(lines) == trace.steps + 1
