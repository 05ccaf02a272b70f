"""Invariant checks run by ``taxfrontier verify``."""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .budget import budget_residual, two_bracket_subsidy
from .distribution import SkillDistribution, moment
from .frontier import GridSpec, frontier_linear, optimize_two_bracket
from .household import respond_oracle, respond_quadratic
from .logmodel import log_balance, log_balance_closed_form, log_budget_residual
from .schedule import TaxPolicy
from .welfare import utility_moments_by_quadrature, welfare_two_bracket

# Published two-bracket optima on uniform(0, 10):
# (c, beta1, beta2, y1, V, U, sigma_u)
REFERENCE_OPTIMA = (
    (0.1, 0.95, 0.92, 0.1, 15.2982, 16.5600, 12.6174),
    (0.2, 0.91, 0.85, 0.1, 14.1376, 16.2917, 10.7705),
    (0.3, 0.87, 0.79, 0.1, 13.1407, 15.9318, 9.3037),
    (0.4, 0.84, 0.74, 0.1, 12.2749, 15.5403, 8.1634),
    (0.5, 0.81, 0.69, 0.1, 11.5167, 15.0655, 7.0976),
)

Balancer = Callable[[float, float, float, SkillDistribution], float]


class CheckResult(NamedTuple):
    name: str
    passed: bool
    measured: float
    tolerance: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name} measured={self.measured:.3e} tol={self.tolerance:.1e}"


def random_policies(rng: np.random.Generator, count: int, beta_lo=0.05, y1_hi=20.0):
    b1 = rng.uniform(beta_lo, 1.0, count)
    b2 = rng.uniform(beta_lo, 1.0, count)
    y1 = rng.uniform(0.01, y1_hi, count)
    return list(zip(b1.tolist(), b2.tolist(), y1.tolist()))


def check_budget_residual(d: SkillDistribution, count: int = 200, seed: int = 0,
                          balancer: Balancer = two_bracket_subsidy) -> CheckResult:
    tol = 1e-9 * max(1.0, moment(d, 2))
    worst = 0.0
    for b1, b2, y1 in random_policies(np.random.default_rng(seed), count):
        alpha = balancer(b1, b2, y1, d)
        worst = max(worst, abs(budget_residual(TaxPolicy(alpha, b1, b2, y1), d)))
    return CheckResult("budget-residual", worst <= tol, worst, tol)


def check_household_oracle(d: SkillDistribution, count: int = 200, seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for b1, b2, y1 in random_policies(rng, count):
        p = TaxPolicy(0.0, b1, b2, y1)
        n = float(rng.uniform(d.lo, d.hi))
        diff = respond_quadratic(p, n).u_star - respond_oracle(p, n).u_star
        worst = max(worst, abs(diff))
    return CheckResult("household-oracle", worst <= 1e-6, worst, 1e-6)


def check_frontier_identity(steps: int = 1001) -> CheckResult:
    curve = frontier_linear(None, steps)
    worst = max(abs(2 * s.sigma_u - (s.sigma_u + s.U) ** 2) for s in curve.samples)
    return CheckResult("frontier-identity", worst <= 1e-10, worst, 1e-10)


def interior_points(d: SkillDistribution, count: int, seed: int):
    """Interior points whose regime thresholds stay inside the support."""
    rng = np.random.default_rng(seed)
    b1 = rng.uniform(0.1, 0.9, count)
    b2 = rng.uniform(0.1, 0.9, count)
    y1 = rng.uniform(0.01, 0.1 * (0.7 * d.hi) ** 2, count)
    return list(zip(b1.tolist(), b2.tolist(), y1.tolist()))


def welfare_gradient(b1, b2, y1, d, h=1e-4):
    """Central differences of U in beta1 and beta2, subsidy re-balanced each time."""

    b1, b2 = min(max(b1, h), 1 - h), min(max(b2, h), 1 - h)

    def u(x1, x2):
        return welfare_two_bracket(x1, x2, y1, d).U

    return (u(b1 + h, b2) - u(b1 - h, b2)) / (2 * h), (u(b1, b2 + h) - u(b1, b2 - h)) / (2 * h)


def check_no_tax_optimum(d: SkillDistribution, count: int = 200, seed: int = 2) -> list[CheckResult]:
    worst = math.inf
    for b1, b2, y1 in interior_points(d, count, seed):
        worst = min(worst, *welfare_gradient(b1, b2, y1, d))
    out = [CheckResult("no-tax-gradient-positive", worst > 0, worst, 0.0)]
    grid = GridSpec((0.5, 1.0, 0.05), (0.5, 1.0, 0.05), (0.01, 0.1, 0.03))
    opt = optimize_two_bracket(0.0, d, grid, workers=1)
    err = abs(opt.welfare.U - moment(d, 2) / 2)
    ok = opt.beta1 == 1.0 and opt.beta2 == 1.0 and err <= 1e-6
    out.append(CheckResult("no-tax-argmax", ok, err, 1e-6))
    return out


def check_split_vs_blind(d: SkillDistribution, count: int = 50, seed: int = 3) -> CheckResult:
    worst = 0.0
    for b1, b2, y1 in random_policies(np.random.default_rng(seed), count):
        w = welfare_two_bracket(b1, b2, y1, d)
        mean, var = utility_moments_by_quadrature(TaxPolicy(w.alpha, b1, b2, y1), d)
        worst = max(worst, abs(w.sigma_u ** 2 - var) / var, abs(w.U - mean) / abs(mean))
    return CheckResult("split-vs-blind-variance", worst <= 1e-9, worst, 1e-9)


def check_reference_optima(tol: float = 1e-3) -> list[CheckResult]:
    d = SkillDistribution.uniform(0.0, 10.0)
    out = []
    for c, b1, b2, y1, v, _, _ in REFERENCE_OPTIMA:
        w = welfare_two_bracket(b1, b2, y1, d, c)
        err = abs(w.V - v)
        out.append(CheckResult(f"reference-optimum-c={c:g}", err <= tol, err, tol))
    return out


def check_log_budget() -> list[CheckResult]:
    worst_res, worst_cf = 0.0, 0.0
    for s in (1.0, 1e6, 1e12):
        for beta in np.round(np.arange(1, 10) * 0.1, 12):
            alpha = log_balance(1.0, float(beta), s)
            worst_res = max(worst_res, abs(log_budget_residual(1.0, float(beta), s, alpha)) / alpha)
            cf = log_balance_closed_form(1.0, float(beta), s)
            worst_cf = max(worst_cf, abs(cf - alpha) / alpha)
    return [CheckResult("log-budget-residual", worst_res <= 1e-10, worst_res, 1e-10),
            CheckResult("log-closed-form-subsidy", worst_cf <= 1e-9, worst_cf, 1e-9)]


def run_checks(d: SkillDistribution, reference_only: bool = False,
               balancer: Balancer = two_bracket_subsidy) -> list[CheckResult]:
    if reference_only:
        return check_reference_optima()
    results = [check_budget_residual(d, balancer=balancer),
               check_household_oracle(d),
               check_frontier_identity()]
    results += check_no_tax_optimum(d)
    results.append(check_split_vs_blind(d))
    results += check_reference_optima()
    results += check_log_budget()
    return results
