import math

import numpy as np
import pytest

from percolab.degrees import DegreeSequence, quantile_degrees, PowerLawSpec
from percolab.generators import configuration_model
from percolab.graphs import build_graph, components
from percolab.percolation import (
    cm_pi_c,
    exact_component_law_direct,
    exact_component_law_janson,
    janson_degree_pmf,
    janson_explode,
    janson_percolate,
    pa_pi_c,
    percolate,
    pi_window_finite_third,
    pi_window_heavy,
    pi_window_single_edge,
    pi_window_tau23,
    regime_diagnostic,
    sample_component_law_direct,
    sample_component_law_janson,
    scaling_constants,
    theta_survival,
    tv_distance,
    ua_pi_c,
)


class TestPercolate:
    def test_pi_one_identity(self):
        g = build_graph(4, [(1, 2), (2, 3), (3, 3)])
        gp = percolate(g, 1.0, np.random.default_rng(0))
        assert sorted(gp.edge_pairs()) == sorted(g.edge_pairs())

    def test_pi_zero_empty(self):
        g = build_graph(4, [(1, 2), (2, 3)])
        gp = percolate(g, 0.0, np.random.default_rng(0))
        assert gp.edge_count == 0 and gp.n == 4

    def test_binomial_count(self):
        g = build_graph(2, [(1, 2)] * 1000)
        rng = np.random.default_rng(8)
        trials = 2000
        kept = np.array([percolate(g, 0.3, rng).edge_count for _ in range(trials)])
        sigma = math.sqrt(1000 * 0.3 * 0.7)
        assert abs(kept.mean() - 300) < 3 * sigma / math.sqrt(trials)

    def test_monotone_coupling(self):
        g = build_graph(6, [(1, 2), (2, 3), (4, 5), (5, 6), (1, 6)])
        uniforms = np.random.default_rng(4).random(g.edge_count)
        low = set(percolate(g, 0.3, uniforms=uniforms).edge_pairs())
        # repeated edges collapse in the set, so count via arrays instead
        keep_low = uniforms < 0.3
        keep_high = uniforms < 0.8
        assert np.all(keep_high[keep_low])

    def test_out_of_range(self):
        g = build_graph(2, [(1, 2)])
        with pytest.raises(ValueError):
            percolate(g, 1.5, np.random.default_rng(0))


class TestWindows:
    def test_fin3_regular(self):
        d = DegreeSequence([3] * 1000)
        assert pi_window_finite_third(d, 0.0) == pytest.approx(0.5)

    def test_fin3_lambda_zero_is_critical(self):
        d = DegreeSequence(np.repeat([1, 2, 3, 4], 100))
        assert pi_window_finite_third(d, 0.0) == pytest.approx(1.0 / d.nu)

    def test_fin3_direct_value(self):
        d = DegreeSequence([3] * (10 ** 6))
        assert pi_window_finite_third(d, 1.0) == pytest.approx(0.505)

    def test_heavy_window(self):
        d = DegreeSequence([3] * 1024)
        got = pi_window_heavy(d, 1.0, 3.5)
        c_n = 1024 ** 0.2  # exponent (tau-3)/(tau-1) = 0.2
        assert got == pytest.approx((1 + 1 / c_n) / 2.0)
        with pytest.raises(ValueError):
            pi_window_heavy(d, 0.0, 4.5)

    def test_heavy_window_wider_than_fin3(self):
        # (tau-3)/(tau-1) < 1/3 for tau < 4, so c_n^-1 > n^-1/3
        for tau in (3.2, 3.5, 3.9):
            n = 10 ** 6
            assert n ** (-(tau - 3) / (tau - 1)) > n ** (-1 / 3)

    def test_tau23_window(self):
        d = quantile_degrees(4096, PowerLawSpec(tau=2.5))
        assert pi_window_tau23(d, 1.0) == pytest.approx(1.0 / d.nu)
        assert 0 < pi_window_tau23(d, 1.0) < 1
        with pytest.raises(ValueError):
            pi_window_tau23(d, 0.0)

    def test_single_edge_window(self):
        assert pi_window_single_edge(10 ** 6, 2.5, 1.0) == pytest.approx(10 ** -1.5)
        # the single-edge retention decays with a smaller exponent than the
        # pairing-model window, so it is much larger; against the signed
        # window exponent (tau-3)/(tau-1) this reads eta_s > eta
        for tau in (2.2, 2.5, 2.8):
            assert (3 - tau) / 2 < (3 - tau) / (tau - 1)
            assert (3 - tau) / 2 > scaling_constants(10, tau).eta
            n = 10 ** 6
            assert n ** (-(3 - tau) / 2) > n ** (-(3 - tau) / (tau - 1))
        with pytest.raises(ValueError):
            pi_window_single_edge(100, 3.5, 1.0)

    def test_clamping_warns(self):
        d = DegreeSequence([2] * 10)  # nu = 1
        with pytest.warns(UserWarning):
            assert pi_window_finite_third(d, 100.0) == 1.0


class TestScalingConstants:
    def test_tau35(self):
        sc = scaling_constants(32, 3.5)
        assert (sc.alpha, sc.rho, sc.eta) == pytest.approx((0.4, 0.6, 0.2))

    def test_alpha_plus_rho(self):
        for tau in (2.1, 2.5, 3.0, 3.9):
            sc = scaling_constants(10, tau)
            assert sc.alpha + sc.rho == pytest.approx(1.0)

    def test_tau25_rho(self):
        assert scaling_constants(10, 2.5).rho == pytest.approx(1.0 / 3.0)

    def test_sequences(self):
        sc = scaling_constants(2 ** 10, 3.5)
        assert sc.a_n == pytest.approx(2 ** 4.0)
        assert sc.b_n == pytest.approx(2 ** 6.0)
        assert sc.c_n == pytest.approx(2 ** 2.0)


class TestJansonExplode:
    def test_pi_one(self):
        d = DegreeSequence([3, 2, 1])
        ex = janson_explode(d, 1.0, np.random.default_rng(0))
        assert ex.n_plus == 0
        assert np.array_equal(ex.degrees, d.d)

    def test_pi_zero(self):
        d = DegreeSequence([3, 2, 1])
        ex = janson_explode(d, 0.0, np.random.default_rng(0))
        assert ex.n_plus == d.ell
        assert np.all(ex.degrees[: d.n] == 0)

    def test_half_edge_conservation(self):
        d = DegreeSequence([4, 3, 3, 2])
        for seed in range(20):
            ex = janson_explode(d, 0.37, np.random.default_rng(seed))
            assert int(ex.degrees.sum()) == d.ell
            assert ex.n_plus == int((d.d - ex.degrees[: d.n]).sum())

    def test_red_count_mean(self):
        d = DegreeSequence([3] * 200)
        rng = np.random.default_rng(5)
        pi = 0.49
        trials = 3000
        nplus = np.array([janson_explode(d, pi, rng).n_plus for _ in range(trials)])
        p_red = 1 - math.sqrt(pi)
        want = d.ell * p_red
        sigma = math.sqrt(d.ell * p_red * (1 - p_red) / trials)
        assert abs(nplus.mean() - want) < 3 * sigma


class TestJansonPercolate:
    def test_pi_one_matches_plain_pairing_law(self):
        d = DegreeSequence([2, 2, 1, 1])
        tv = tv_distance(exact_component_law_direct(d, 1.0),
                         exact_component_law_janson(d, 1.0))
        assert tv < 1e-12

    def test_exact_equivalence_half(self):
        d = DegreeSequence([2, 2, 1, 1])
        tv = tv_distance(exact_component_law_direct(d, 0.5),
                         exact_component_law_janson(d, 0.5))
        assert tv < 1e-10

    def test_exact_equivalence_other_sequences(self):
        for dlist, pi in [([3, 1, 1, 1], 0.3), ([2, 2, 2], 0.7), ([1, 1], 0.42)]:
            d = DegreeSequence(dlist)
            tv = tv_distance(exact_component_law_direct(d, pi),
                             exact_component_law_janson(d, pi))
            assert tv < 1e-10

    def test_sampled_equivalence_small(self):
        d = DegreeSequence([2, 2, 1, 1])
        rng = np.random.default_rng(6)
        a = sample_component_law_direct(d, 0.5, 20_000, rng)
        b = sample_component_law_janson(d, 0.5, 20_000, rng)
        assert tv_distance(a, b) < 0.03

    def test_degrees_never_exceed_original(self):
        d = DegreeSequence([4, 3, 2, 1])
        for seed in range(10):
            g = janson_percolate(d, 0.5, np.random.default_rng(seed))
            assert np.all(g.degrees() <= d.d)


class TestThetaSurvival:
    def test_subcritical_zero(self):
        p = np.zeros(4)
        p[3] = 1.0  # 3-regular, nu = 2
        assert theta_survival(p, 0.5) == 0.0
        assert theta_survival(p, 0.2) == 0.0

    def test_three_regular_full_retention(self):
        p = np.zeros(4)
        p[3] = 1.0
        assert theta_survival(p, 1.0) == pytest.approx(1.0)

    def test_three_regular_point_six(self):
        # eta solves eta = (0.4 + 0.6 eta)^2 => eta = 4/9, theta = 1 - (2/3)^3
        p = np.zeros(4)
        p[3] = 1.0
        assert theta_survival(p, 0.6) == pytest.approx(19.0 / 27.0, abs=1e-10)

    def test_monotone_in_pi(self):
        p = np.array([0.0, 0.2, 0.3, 0.3, 0.2])
        values = [theta_survival(p, pi) for pi in np.linspace(0, 1, 21)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_zero_iff_subcritical(self):
        p = np.array([0.0, 0.2, 0.3, 0.3, 0.2])
        k = np.arange(5)
        mu = (k * p).sum()
        nu = (k * (k - 1) * p).sum() / mu
        pi_c = 1.0 / nu
        assert theta_survival(p, pi_c * 0.999) == 0.0
        assert theta_survival(p, min(pi_c * 1.05, 1.0)) > 0.0


class TestJansonDegreePmf:
    def test_normalised_and_mean(self):
        p = np.array([0.0, 0.3, 0.4, 0.3])
        for pi in (0.2, 0.5, 0.9):
            q = janson_degree_pmf(p, pi)
            assert q.sum() == pytest.approx(1.0)
            k = np.arange(len(p))
            mu = (k * p).sum()
            c = 1.0 + mu * (1 - math.sqrt(pi))
            kq = np.arange(len(q))
            assert (kq * q).sum() == pytest.approx(mu / c)

    def test_critical_forward_degree_is_one(self):
        # at pi_c the exploded model sits exactly at criticality
        p = np.zeros(4)
        p[3] = 1.0  # nu = 2, pi_c = 1/2
        q = janson_degree_pmf(p, 0.5)
        kq = np.arange(len(q))
        nu_q = (kq * (kq - 1) * q).sum() / (kq * q).sum()
        assert nu_q == pytest.approx(1.0, abs=1e-12)


class TestCriticalValues:
    def test_cm(self):
        assert cm_pi_c(DegreeSequence([3, 3, 3, 3])) == pytest.approx(0.5)

    def test_ua_closed_form(self):
        assert ua_pi_c() == pytest.approx((2 - math.sqrt(2)) / 4, abs=1e-15)
        assert ua_pi_c() == pytest.approx(1.0 / (2 * (2 + math.sqrt(2))), abs=1e-15)

    def test_pa_direct_value(self):
        assert pa_pi_c(2, 1.0) == pytest.approx(1.0 / (2 * (6 + math.sqrt(24))), abs=1e-12)

    def test_pa_zero_branch(self):
        assert pa_pi_c(2, 0.0) == 0.0
        assert pa_pi_c(3, -1.5) == 0.0

    def test_pa_domain(self):
        with pytest.raises(ValueError):
            pa_pi_c(2, -2.0)


class TestRegimeDiagnostic:
    def test_all_ones_subcritical(self):
        rep = regime_diagnostic([10, 10, 10], [10, 10, 10])
        assert rep.label == "barely-subcritical"

    def test_all_zero_supercritical(self):
        rep = regime_diagnostic([50, 60], [0, 0])
        assert rep.label == "barely-supercritical"

    def test_middle_is_window(self):
        rep = regime_diagnostic([100, 100, 100], [40, 50, 60])
        assert rep.label == "critical-window"
        assert rep.fraction_in_band == 1.0

    def test_needs_samples(self):
        with pytest.raises(ValueError):
            regime_diagnostic([10], [5])
