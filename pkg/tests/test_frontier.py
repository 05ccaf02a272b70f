import numpy as np
import pytest

from taxfrontier.distribution import SkillDistribution, moment, n2_moments
from taxfrontier.errors import InvalidArgument
from taxfrontier.frontier import (GridSpec, dense_linear_search, dominating_cells,
                                  frontier_linear, frontier_two_bracket, grid_values,
                                  optimal_linear_closed_form, optimize_two_bracket,
                                  resolve_workers)

SMALL = GridSpec((0.5, 1.0, 0.05), (0.5, 1.0, 0.05), (0.02, 0.1, 0.04))


class TestLinearOptimum:
    def test_no_aversion(self):
        beta, w = optimal_linear_closed_form(0.0)
        assert (beta, w.U, w.sigma_u) == (1.0, 0.5, 0.5)

    def test_unit_aversion(self):
        beta, w = optimal_linear_closed_form(1.0)
        assert (beta, w.sigma_u, w.U) == pytest.approx((0.5, 0.125, 0.375), abs=1e-15)

    def test_uniform_stationary_point(self, u10):
        beta, w = optimal_linear_closed_form(0.5, u10)
        assert beta == pytest.approx(0.690983, abs=1e-6)
        # grid of step 1e-5 maximising V lands on 0.69098
        b_grid, _ = dense_linear_search(0.5, u10)
        assert abs(beta - b_grid) <= 1e-5

    @pytest.mark.parametrize("c", np.round(np.arange(0, 51) * 0.1, 10))
    def test_closed_form_vs_search_normalised(self, c):
        b, w = optimal_linear_closed_form(float(c))
        bg, wg = dense_linear_search(float(c))
        assert abs(b - bg) <= 1e-4
        assert abs(w.U - wg.U) <= 1e-4 and abs(w.sigma_u - wg.sigma_u) <= 1e-4

    def test_negative_c(self):
        with pytest.raises(InvalidArgument):
            optimal_linear_closed_form(-0.1)


class TestLinearFrontier:
    def test_endpoints(self):
        curve = frontier_linear(None, 11)
        first, last = curve.samples[0], curve.samples[-1]
        assert (first.U, first.sigma_u) == (0.0, 0.0)
        assert (last.U, last.sigma_u) == (0.5, 0.5)

    def test_sample_at_06(self):
        curve = frontier_linear(None, 6)
        s = curve.samples[3]
        assert s.sweep_param == pytest.approx(0.6)
        # sigma = beta^2 / 2, U = beta - beta^2 / 2
        assert (s.sigma_u, s.U) == pytest.approx((0.18, 0.42), abs=1e-15)
        assert abs(2 * s.sigma_u - (s.sigma_u + s.U) ** 2) <= 1e-12

    def test_identity_normalised_uniform(self, u10):
        curve = frontier_linear(u10, 501, normalized=True)
        res = [abs(2 * s.sigma_u - (s.sigma_u + s.U) ** 2) for s in curve.samples]
        assert max(res) <= 1e-10

    def test_efficient_and_ordered(self, u10):
        curve = frontier_linear(u10, 101)
        assert np.all(np.diff([s.sweep_param for s in curve.samples]) > 0)
        assert np.all(np.diff(curve.U) >= 0) and np.all(np.diff(curve.sigma_u) >= 0)

    def test_too_few_steps(self):
        with pytest.raises(InvalidArgument):
            frontier_linear(None, 1)


class TestGridSpec:
    def test_default_shape(self):
        g = GridSpec()
        assert g.shape == (100, 100, 10)
        assert g.beta2_values[91] == 0.92 and g.y1_values[-1] == 0.1

    @pytest.mark.parametrize("kw", [dict(beta1_range=(0.5, 1.2, 0.1)),
                                    dict(y1_range=(0.0, 0.1, 0.01)),
                                    dict(beta2_range=(0.1, 0.5, 0.0)),
                                    dict(beta2_range=(0.5, 0.1, 0.1))])
    def test_invalid(self, kw):
        with pytest.raises(InvalidArgument):
            GridSpec(**kw)


class TestTwoBracketSearch:
    def test_no_aversion_picks_no_tax(self, u10):
        opt = optimize_two_bracket(0.0, u10, SMALL)
        assert (opt.beta1, opt.beta2) == (1.0, 1.0)
        assert opt.y1 == 0.02  # every y1 ties exactly; smallest wins
        assert opt.welfare.U == pytest.approx(moment(u10, 2) / 2, abs=1e-12)

    def test_matches_exhaustive_argmax(self, u10):
        c = 0.3
        _, u, sigma = grid_values(u10, SMALL)
        v = u - c * sigma
        i = np.unravel_index(np.argmax(v), v.shape)
        opt = optimize_two_bracket(c, u10, SMALL)
        assert (opt.beta1, opt.beta2, opt.y1) == (SMALL.beta1_values[i[0]],
                                                  SMALL.beta2_values[i[1]], SMALL.y1_values[i[2]])

    @pytest.mark.parametrize("workers", [1, 3, 8])
    def test_worker_count_irrelevant(self, u10, workers):
        ref = optimize_two_bracket(0.2, u10, SMALL, workers=1)
        assert optimize_two_bracket(0.2, u10, SMALL, workers=workers) == ref

    def test_tie_break_smallest(self, u10):
        # equal shares make y1 irrelevant, so only the tie-break picks it
        g = GridSpec((0.7, 0.7, 0.1), (0.7, 0.7, 0.1), (0.01, 0.05, 0.01))
        assert optimize_two_bracket(0.4, u10, g).y1 == 0.01

    def test_argmax_not_dominated(self, u10):
        _, u, sigma = grid_values(u10, SMALL)
        for c in (0.1, 0.5, 2.0):
            w = optimize_two_bracket(c, u10, SMALL).welfare
            assert dominating_cells(w.U, w.sigma_u, u, sigma) == 0

    def test_frontier_monotone(self, u10):
        cs = np.round(np.linspace(0, 3, 31), 10)
        curve = frontier_two_bracket(list(cs[::-1]), u10, SMALL)
        assert [s.sweep_param for s in curve.samples] == sorted(cs)
        assert np.all(np.diff(curve.U) <= 0)
        assert np.all(np.diff(curve.sigma_u) <= 0)

    def test_single_c_zero(self, u10):
        curve = frontier_two_bracket([0.0], u10, SMALL)
        m2, sd2 = n2_moments(u10)
        s = curve.samples[0]
        assert (s.sigma_u, s.U) == pytest.approx((sd2 / 2, m2 / 2), rel=1e-12)

    def test_empty_c_list(self, u10):
        with pytest.raises(InvalidArgument):
            frontier_two_bracket([], u10)


def test_resolve_workers(monkeypatch):
    monkeypatch.setenv("TAXFRONTIER_THREADS", "3")
    assert resolve_workers() == 3
    monkeypatch.setenv("TAXFRONTIER_THREADS", "0")
    assert resolve_workers() >= 1
    monkeypatch.setenv("TAXFRONTIER_THREADS", "many")
    with pytest.raises(InvalidArgument):
        resolve_workers()


def test_non_uniform_grid_path():
    d = SkillDistribution.from_density(lambda n: 2 * n / 25, 0.0, 5.0)
    g = GridSpec((0.8, 1.0, 0.1), (0.8, 1.0, 0.1), (0.5, 0.5, 0.1))
    opt = optimize_two_bracket(0.0, d, g)
    assert (opt.beta1, opt.beta2) == (1.0, 1.0)
