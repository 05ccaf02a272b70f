"""Linear tax with logarithmic utility u(c, l) = ln c + A ln(1 - l).

Skills are uniform on [0, s].  Households with n below
``n0 = A * alpha / beta`` do not work and live on the subsidy alone.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .distribution import SkillDistribution, expect, expect_many
from .errors import InvalidArgument, NoBalanceError
from .frontier import FrontierCurve, FrontierSample
from .household import HouseholdOutcome
from .welfare import WelfarePoint, _check_c

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LogModelParams:
    A: float
    s: float
    beta: float
    alpha: float

    def __post_init__(self):
        _check_model(self.A, self.beta, self.s)
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise InvalidArgument(f"log model needs a positive subsidy, got {self.alpha!r}")

    @property
    def n0(self) -> float:
        """Participation threshold: l* = 0 for n <= n0."""
        return self.A * self.alpha / self.beta


def _check_model(A, beta, s):
    if not (A > 0 and math.isfinite(A)):
        raise InvalidArgument(f"A must be positive, got {A!r}")
    if not 0 < beta < 1:
        raise InvalidArgument(f"beta must lie in (0, 1), got {beta!r}")
    if not (s > 0 and math.isfinite(s)):
        raise InvalidArgument(f"s must be positive, got {s!r}")


def k_const(A: float) -> float:
    return A * math.log(A) - (A + 1) * math.log(A + 1)


def log_effort(A, beta, alpha, n):
    """First-order-condition effort max(0, (beta n - A alpha) / ((A+1) beta n))."""
    n = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        l = (beta * n - A * alpha) / ((A + 1) * beta * n)
    return np.where(beta * n > A * alpha, l, 0.0)


def log_utility(A, beta, alpha, n):
    l = log_effort(A, beta, alpha, n)
    return np.log(alpha + beta * n * l) + A * np.log1p(-l)


def log_respond(params: LogModelParams, n: float) -> HouseholdOutcome:
    if not 0 <= n <= params.s:
        raise InvalidArgument(f"skill must lie in [0, s], got {n!r}")
    A, b, a = params.A, params.beta, params.alpha
    l = float(log_effort(A, b, a, n))
    u = float(log_utility(A, b, a, n))
    return HouseholdOutcome(l, n * l, u, -a + (1 - b) * n * l)


def log_oracle_respond(params: LogModelParams, n: float, step: float = 1e-7) -> HouseholdOutcome:
    """Grid maximisation of utility over effort in [0, 1), then bounded refinement."""
    A, b, a = params.A, params.beta, params.alpha
    grid = np.arange(0, int(1 / step)) * step

    def util(l):
        return np.log(a + b * n * l) + A * np.log1p(-l)

    vals = util(grid)
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    best_l, best_u = float(grid[i]), float(vals[i])
    res = optimize.minimize_scalar(lambda l: -float(util(l)), bounds=(lo, hi),
                                   method="bounded", options={"xatol": 1e-13})
    if -res.fun > best_u:
        best_l, best_u = float(res.x), float(-res.fun)
    return HouseholdOutcome(best_l, n * best_l, best_u, -a + (1 - b) * n * best_l)


# -- budget balance ---------------------------------------------------------

def log_budget_residual(A: float, beta: float, s: float, alpha: float) -> float:
    """Integral of the tax paid, by quadrature over the working population."""
    d = SkillDistribution.uniform(0.0, s)
    n0 = A * alpha / beta
    worked = 0.0
    if n0 < s:
        def taxed_income(n):
            return (1 - beta) * (beta * n - A * alpha) / ((A + 1) * beta)

        worked = expect(d, taxed_income, n0, s, atol=1e-15 * alpha)
    return worked - alpha


def log_balance(A: float, beta: float, s: float) -> float:
    """Subsidy balancing the budget, found by bracketed root-finding.

    The residual is positive at alpha = 0 and equals -alpha once nobody
    works (alpha >= beta s / A), so [0, beta s / A] always brackets it.
    """
    _check_model(A, beta, s)
    hi = beta * s / A
    f0, f1 = log_budget_residual(A, beta, s, 0.0), log_budget_residual(A, beta, s, hi)
    if not (f0 > 0 > f1):
        raise NoBalanceError(f"no sign change on [0, {hi}]: {f0}, {f1}")
    root, info = optimize.brentq(lambda a: log_budget_residual(A, beta, s, a), 0.0, hi,
                                 xtol=hi * 1e-17, rtol=1e-14, maxiter=200,
                                 full_output=True, disp=False)
    if not info.converged:
        raise NoBalanceError(f"subsidy root-find stalled: {info.flag}")
    return root


def log_balance_closed_form(A: float, beta: float, s: float) -> float:
    """Printed closed-form subsidy; agrees with ``log_balance`` only at A = 1."""
    _check_model(A, beta, s)
    ratio = A / (1 - beta) * (1 + A * beta - math.sqrt((A + 1) * beta * (2 + (A - 1) * beta)))
    return ratio * beta * s


# -- welfare ------------------------------------------------------------------

def _sweep_moments(A: float, s: float, betas: np.ndarray, alphas: np.ndarray):
    """(U, sigma_u) for each (beta, alpha), one vector quadrature per moment."""
    d = SkillDistribution.uniform(0.0, s)
    n0 = np.minimum(A * alphas / betas, s)
    idle = n0 / s
    base = np.log(alphas)
    mean = idle * base + expect_many(d, lambda n: log_utility(A, betas, alphas, n), n0, s)
    var = idle * (base - mean) ** 2 + expect_many(
        d, lambda n: (log_utility(A, betas, alphas, n) - mean) ** 2, n0, s)
    return mean, np.sqrt(np.maximum(var, 0.0))


def log_welfare(A: float, beta: float, s: float, c: float = 0.0,
                alpha: Optional[float] = None) -> WelfarePoint:
    """U = E[u*], sigma_u = sd(u*), integrating the working population and
    adding the idle mass [0, n0] at utility ln(alpha) exactly."""
    _check_model(A, beta, s)
    _check_c(c)
    if alpha is None:
        alpha = log_balance(A, beta, s)
    u, sd = _sweep_moments(A, s, np.array([beta]), np.array([alpha]))
    return WelfarePoint.build(float(u[0]), float(sd[0]), c, alpha)


def log_welfare_decomposed(beta: float, s: float, alpha: float) -> tuple[float, float]:
    """(U, sigma_u) via the subsidy / indicator / cross-term decomposition at A = 1.

    u = ln(alpha) + (k + H(N)) 1{N >= n0} with
    H(n) = ln(1 + n beta / alpha) + ln((alpha / beta + n) / n).
    """
    A = 1.0
    d = SkillDistribution.uniform(0.0, s)
    n0 = min(alpha / beta, s)
    k = k_const(A)
    p = (s - n0) / s

    def h(n):
        return A * math.log1p(n * beta / alpha) + math.log((alpha / beta + n) / n)

    eh = expect(d, h, n0, s)
    eh2 = expect(d, lambda n: (h(n) - eh / p) ** 2, n0, s)
    var_h = eh2 + p * (1 - p) * (eh / p) ** 2  # Var(H 1) from the centred moment
    u = A * math.log(alpha) + k * p + eh
    var = k * k * p * (1 - p) + var_h + 2 * k * (1 - p) * eh
    return u, math.sqrt(max(var, 0.0))


def log_sweep(A: float, s: float, betas, c: float = 0.0) -> list[WelfarePoint]:
    betas = np.asarray(betas, dtype=float)
    _check_c(c)
    for b in betas:
        _check_model(A, float(b), s)
    alphas = np.array([log_balance(A, float(b), s) for b in betas])
    u, sd = _sweep_moments(A, s, betas, alphas)
    return [WelfarePoint.build(float(x), float(y), c, float(a)) for x, y, a in zip(u, sd, alphas)]


def beta_grid(step: float) -> np.ndarray:
    if not 0 < step < 0.5:
        raise InvalidArgument(f"beta grid step must lie in (0, 0.5), got {step!r}")
    count = int(math.floor(1.0 / step - 1e-9))
    return np.round(step * np.arange(1, count + 1), 12)


def count_local_maxima(values) -> int:
    """Strict interior local maxima plus maximal endpoints of a sampled curve."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return int(v.size)
    left = np.concatenate(([-np.inf], v[:-1]))
    right = np.concatenate((v[1:], [-np.inf]))
    return int(np.count_nonzero((v > left) & (v >= right)))


def log_optimize(A: float, s: float, c: float = 0.0, beta_grid_step: float = 1e-4):
    """Maximise V = U - c sigma_u over beta in (0, 1): grid, then bounded refinement."""
    _check_c(c)
    betas = beta_grid(beta_grid_step)
    pts = log_sweep(A, s, betas, c)
    u = np.array([p.U for p in pts])
    if count_local_maxima(u) != 1:
        log.warning("U(beta) is not unimodal on the sweep (%d local maxima)",
                    count_local_maxima(u))
    v = np.array([p.V for p in pts])
    i = int(np.argmax(v))
    lo, hi = betas[max(i - 1, 0)], betas[min(i + 1, betas.size - 1)]
    best_b, best = float(betas[i]), pts[i]
    if hi > lo:
        res = optimize.minimize_scalar(lambda b: -log_welfare(A, b, s, c).V, bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-9})
        cand = log_welfare(A, float(res.x), s, c)
        if cand.V > best.V:
            best_b, best = float(res.x), cand
    return best_b, best


def log_frontier(A: float, s: float, beta_grid_step: float = 1e-3) -> FrontierCurve:
    """The (sigma_u, U) curve over beta, cut at the U-maximising beta.

    Betas beyond the maximum of U give more dispersion for less welfare and
    are dropped.
    """
    betas = beta_grid(beta_grid_step)
    pts = log_sweep(A, s, betas)
    top = int(np.argmax([p.U for p in pts]))
    curve = FrontierCurve("log-beta-sweep")
    for b, p in zip(betas[: top + 1], pts[: top + 1]):
        b = float(b)
        curve.samples.append(FrontierSample(b, 0.0, b, b, float("nan"), p.alpha, p.U, p.sigma_u, p.V))
    return curve
