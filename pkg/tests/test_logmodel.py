import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taxfrontier.distribution import SkillDistribution, expect
from taxfrontier.errors import InvalidArgument
from taxfrontier.logmodel import (LogModelParams, _sweep_moments, beta_grid, count_local_maxima,
                                  k_const, log_balance, log_balance_closed_form,
                                  log_budget_residual, log_frontier, log_optimize,
                                  log_oracle_respond, log_respond, log_sweep, log_welfare,
                                  log_welfare_decomposed)

BIG = 1e12


class TestRespond:
    def test_interior(self):
        # effort grid of step 1e-7 peaks at l = 0.4, u = ln(1.8)
        out = log_respond(LogModelParams(1.0, 20.0, 0.5, 1.0), 10.0)
        assert out.l_star == pytest.approx(0.4, abs=1e-15)
        assert out.u_star == pytest.approx(math.log(1.8), abs=1e-15)
        assert out.t_star == pytest.approx(1.0, abs=1e-14)

    def test_corner(self):
        p = LogModelParams(2.0, 10.0, 0.5, 1.0)
        out = log_respond(p, 0.9 * p.n0)
        assert out.l_star == 0.0 and out.u_star == math.log(1.0)

    def test_k_at_one(self):
        assert k_const(1.0) == pytest.approx(-2 * math.log(2), abs=1e-15)
        assert k_const(1.0) == pytest.approx(-1.386294, abs=1e-6)

    def test_bounds(self):
        p = LogModelParams(1.0, 10.0, 0.5, 1.0)
        with pytest.raises(InvalidArgument):
            log_respond(p, 11.0)
        with pytest.raises(InvalidArgument):
            LogModelParams(1.0, 10.0, 0.5, 0.0)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.2, 5), st.floats(0.05, 0.95), st.floats(0.1, 5), st.floats(0, 100))
    def test_matches_oracle(self, A, beta, alpha, n):
        p = LogModelParams(A, 100.0, beta, alpha)
        fast, slow = log_respond(p, n), log_oracle_respond(p, n, step=1e-5)
        assert abs(fast.u_star - slow.u_star) <= 1e-6
        assert 0.0 <= fast.l_star < 1 / (A + 1)


class TestBalance:
    def test_unit_support(self):
        # independent bisection on a quadrature residual gives 0.07452729901096053
        alpha = log_balance(1.0, 0.6138, 1.0)
        assert alpha == pytest.approx(0.07452729901096053, rel=1e-12)
        assert alpha / 0.6138 == pytest.approx((1 - 0.6138**0.5) / (1 + 0.6138**0.5), rel=1e-12)
        assert abs(log_budget_residual(1.0, 0.6138, 1.0, alpha)) <= 1e-10 * alpha

    def test_vanishes_as_beta_to_one(self):
        alphas = [log_balance(1.0, b, 1.0) for b in (0.9, 0.99, 0.999, 0.9999)]
        assert np.all(np.diff(alphas) < 0) and alphas[-1] < 1e-4

    def test_scales_with_support(self):
        a1 = log_balance(1.0, 0.6138, 1.0)
        assert log_balance(1.0, 0.6138, BIG) == pytest.approx(a1 * BIG, rel=1e-12)
        assert log_balance(1.0, 0.6138, BIG) == pytest.approx(7.4527e10, rel=1e-4)

    @pytest.mark.parametrize("s", [1.0, 1e6, 1e12])
    @pytest.mark.parametrize("beta", np.round(np.arange(1, 10) * 0.1, 12))
    def test_residual_and_closed_form(self, s, beta):
        alpha = log_balance(1.0, float(beta), s)
        assert abs(log_budget_residual(1.0, float(beta), s, alpha)) <= 1e-10 * alpha
        assert abs(log_balance_closed_form(1.0, float(beta), s) - alpha) <= 1e-9 * alpha

    @pytest.mark.parametrize("A", [0.5, 2.0, 3.0])
    def test_general_weight_against_participation_root(self, A):
        # budget with participation threshold n0 = A alpha / beta reduces to
        # 2 (A+1) beta x = (1 - beta) (1 - A x)^2 with x = alpha / (beta s)
        beta, s = 0.6, 1.0
        x = log_balance(A, beta, s) / (beta * s)
        assert 2 * (A + 1) * beta * x == pytest.approx((1 - beta) * (1 - A * x) ** 2, rel=1e-10)

    def test_printed_closed_form_only_at_unit_weight(self):
        a = log_balance(2.0, 0.6, 1.0)
        assert abs(log_balance_closed_form(2.0, 0.6, 1.0) - a) > 1e-3 * a

    def test_invalid(self):
        for args in [(0.0, 0.5, 1.0), (1.0, 1.0, 1.0), (1.0, 0.5, -1.0)]:
            with pytest.raises(InvalidArgument):
                log_balance(*args)


class TestWelfare:
    def test_max_point(self):
        w = log_welfare(1.0, 0.6138, BIG)
        assert abs(w.U - 25.4788) <= 0.005

    def test_c1_point(self):
        w = log_welfare(1.0, 0.427, BIG, 1.0)
        assert abs(w.U - 25.428) <= 0.01
        assert abs(w.sigma_u - 0.188) <= 0.005

    @pytest.mark.parametrize("beta", [0.2, 0.427, 0.6138, 0.9])
    def test_decomposition(self, beta):
        alpha = log_balance(1.0, beta, BIG)
        w = log_welfare(1.0, beta, BIG, alpha=alpha)
        u, sd = log_welfare_decomposed(beta, BIG, alpha)
        assert u == pytest.approx(w.U, rel=1e-10)
        assert sd == pytest.approx(w.sigma_u, rel=1e-8)

    def test_direct_scalar_quadrature(self):
        beta, s = 0.5, 50.0
        alpha = log_balance(1.0, beta, s)
        d = SkillDistribution.uniform(0.0, s)
        p = LogModelParams(1.0, s, beta, alpha)
        mean = expect(d, lambda n: log_respond(p, n).u_star, 0, p.n0) + expect(
            d, lambda n: log_respond(p, n).u_star, p.n0, s)
        w = log_welfare(1.0, beta, s, alpha=alpha)
        assert w.U == pytest.approx(mean, rel=1e-11)

    def test_sigma_ignores_added_constant(self):
        betas = np.array([0.4])
        alpha = np.array([log_balance(1.0, 0.4, BIG)])
        _, sd = _sweep_moments(1.0, BIG, betas, alpha)
        samples = [log_respond(LogModelParams(1.0, BIG, 0.4, alpha[0]), n).u_star
                   for n in np.linspace(0, BIG, 2001)]
        assert np.std(np.array(samples) + 1e3) == pytest.approx(np.std(samples), rel=1e-10)
        assert sd[0] > 0

    @pytest.mark.parametrize("lam", [10.0, 1e3, 1e6])
    def test_scale_covariance(self, lam):
        u1 = log_welfare(1.0, 0.5, 1e4).U
        u2 = log_welfare(1.0, 0.5, 1e4 * lam).U
        assert abs(u2 - u1 - math.log(lam)) <= 1e-8

    def test_sweep_matches_scalar(self):
        pts = log_sweep(1.0, BIG, [0.3, 0.6])
        for b, p in zip((0.3, 0.6), pts):
            assert p.U == pytest.approx(log_welfare(1.0, b, BIG).U, rel=1e-12)


class TestOptimize:
    def test_unimodal_sweep(self):
        pts = log_sweep(1.0, BIG, beta_grid(1e-2))
        assert count_local_maxima([p.U for p in pts]) == 1

    def test_local_maxima_counter(self):
        assert count_local_maxima([0, 1, 0, 2, 1]) == 2
        assert count_local_maxima([3, 2, 1]) == 1

    def test_coarse_grid_refines(self):
        beta, w = log_optimize(1.0, BIG, 0.0, beta_grid_step=1e-2)
        assert abs(beta - 0.6138) <= 1e-3
        assert abs(w.U - 25.4788) <= 0.005

    def test_large_c_drives_beta_to_least_dispersion(self):
        pts = log_sweep(1.0, BIG, beta_grid(1e-2))
        least = beta_grid(1e-2)[int(np.argmin([p.sigma_u for p in pts]))]
        beta, _ = log_optimize(1.0, BIG, 1e4, beta_grid_step=1e-2)
        assert abs(beta - least) <= 1e-2

    def test_warns_on_multimodal(self, monkeypatch, caplog):
        import taxfrontier.logmodel as lm
        monkeypatch.setattr(lm, "count_local_maxima", lambda v: 2)
        with caplog.at_level(logging.WARNING):
            lm.log_optimize(1.0, BIG, 0.0, beta_grid_step=0.1)
        assert "not unimodal" in caplog.text


def test_frontier_efficient_portion():
    curve = log_frontier(1.0, BIG, 1e-2)
    top = curve.samples[-1]
    assert abs(top.beta1 - 0.61) <= 0.011
    assert np.all(np.diff(curve.U) > 0)
    assert all(s.sweep_param <= top.sweep_param for s in curve.samples)
