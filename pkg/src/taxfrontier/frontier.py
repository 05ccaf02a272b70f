"""Efficient frontiers and optimal policies for the U - c sigma_u criterion."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .distribution import SkillDistribution, n2_moments
from .errors import InvalidArgument
from .moments import evaluate
from .welfare import WelfarePoint, _check_c, welfare_linear

THREADS_ENV = "TAXFRONTIER_THREADS"


def _inclusive_range(start: float, stop: float, step: float) -> np.ndarray:
    if not (step > 0 and math.isfinite(step)):
        raise InvalidArgument(f"grid step must be positive, got {step!r}")
    if stop < start:
        raise InvalidArgument(f"empty grid range [{start}, {stop}]")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # rounding keeps 0.92 == float("0.92") so tie-breaks match the printed grid
    return np.round(start + step * np.arange(count), 12)


@dataclass(frozen=True)
class GridSpec:
    """Inclusive (start, stop, step) ranges for the two-bracket search."""

    beta1_range: tuple[float, float, float] = (0.01, 1.00, 0.01)
    beta2_range: tuple[float, float, float] = (0.01, 1.00, 0.01)
    y1_range: tuple[float, float, float] = (0.01, 0.10, 0.01)

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            vals = getattr(self, name + "_values")
            if vals[0] < 0 or vals[-1] > 1:
                raise InvalidArgument(f"{name} grid leaves [0, 1]")
        if self.y1_values[0] <= 0:
            raise InvalidArgument("y1 grid must be positive")

    @property
    def beta1_values(self) -> np.ndarray:
        return _inclusive_range(*self.beta1_range)

    @property
    def beta2_values(self) -> np.ndarray:
        return _inclusive_range(*self.beta2_range)

    @property
    def y1_values(self) -> np.ndarray:
        return _inclusive_range(*self.y1_range)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.beta1_values.size, self.beta2_values.size, self.y1_values.size


class FrontierSample(NamedTuple):
    sweep_param: float
    c: float
    beta1: float
    beta2: float
    y1: float
    alpha: float
    U: float
    sigma_u: float
    V: float


@dataclass
class FrontierCurve:
    kind: str  # "linear-beta-sweep" | "two-bracket-c-sweep" | "log-beta-sweep"
    samples: list[FrontierSample] = field(default_factory=list)

    @property
    def U(self) -> np.ndarray:
        return np.array([s.U for s in self.samples])

    @property
    def sigma_u(self) -> np.ndarray:
        return np.array([s.sigma_u for s in self.samples])


class TwoBracketOptimum(NamedTuple):
    beta1: float
    beta2: float
    y1: float
    welfare: WelfarePoint


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError:
            raise InvalidArgument(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 0:
        raise InvalidArgument("worker count must be >= 0")
    return workers or (os.cpu_count() or 1)


# -- linear tax ------------------------------------------------------------

def optimal_linear_closed_form(c: float, d: Optional[SkillDistribution] = None):
    """Maximiser of U - c sigma_u over linear taxes.

    In normalised units the optimum is beta = 1/(1+c).  For a concrete
    distribution the stationary point is E[N^2] / (E[N^2] + c sd(N^2)).
    """
    _check_c(c)
    if d is None:
        beta = 1.0 / (1.0 + c)
        sigma = 1.0 / (2.0 * (c + 1.0) ** 2)
        u = (2.0 * c + 1.0) / (2.0 * (c + 1.0) ** 2)
        return beta, WelfarePoint.build(u, sigma, c, (1 - beta) * beta)
    m2, sd2 = n2_moments(d)
    beta = min(max(m2 / (m2 + c * sd2), 0.0), 1.0)
    return beta, welfare_linear(beta, d, c)


def dense_linear_search(c: float, d: Optional[SkillDistribution] = None, step: float = 1e-5):
    """Brute-force maximisation of V over a beta grid on [0, 1]."""
    _check_c(c)
    m2, sd2 = n2_moments(d)
    beta = _inclusive_range(0.0, 1.0, step)
    v = beta * (1 - 0.5 * beta) * m2 - c * 0.5 * beta * beta * sd2
    b = float(beta[int(np.argmax(v))])
    return b, welfare_linear(b, d, c)


def frontier_linear(d: Optional[SkillDistribution], beta_steps: int = 101,
                    normalized: bool = False) -> FrontierCurve:
    """Sweep beta uniformly over [0, 1]; ``normalized`` divides U by E[N^2]
    and sigma_u by sd(N^2)."""
    if beta_steps < 2:
        raise InvalidArgument("beta_steps must be at least 2")
    m2, sd2 = n2_moments(d) if normalized else (1.0, 1.0)
    curve = FrontierCurve("linear-beta-sweep")
    for beta in np.linspace(0.0, 1.0, beta_steps):
        beta = float(beta)
        w = welfare_linear(beta, d)
        u, s, a = w.U / m2, w.sigma_u / sd2, w.alpha / m2
        curve.samples.append(FrontierSample(beta, 0.0, beta, beta, float("nan"), a, u, s, u))
    return curve


# -- two brackets ----------------------------------------------------------

def grid_values(d: SkillDistribution, grid: GridSpec):
    """Full (alpha, U, sigma_u) arrays over the grid, indexed [beta1, beta2, y1]."""
    b1, b2, y = np.meshgrid(grid.beta1_values, grid.beta2_values, grid.y1_values, indexing="ij")
    alpha, u, sigma, _ = evaluate(d, b1, b2, y, 0.0)
    return alpha, u, sigma


def _best_in_slice(d: SkillDistribution, beta1: float, beta2s: np.ndarray,
                   y1s: np.ndarray, c: float):
    b2, y = np.meshgrid(beta2s, y1s, indexing="ij")
    alpha, u, sigma, v = evaluate(d, np.full_like(b2, beta1), b2, y, c)
    v = np.where(np.isnan(v), -np.inf, v)
    j, k = np.unravel_index(int(np.argmax(v)), v.shape)  # first max = smallest (beta2, y1)
    return float(v[j, k]), j, k, float(alpha[j, k]), float(u[j, k]), float(sigma[j, k])


def optimize_two_bracket(c: float, d: SkillDistribution, grid: GridSpec = GridSpec(),
                         workers: Optional[int] = None) -> TwoBracketOptimum:
    """Grid argmax of V with the subsidy re-balanced in every cell.

    Each beta1 slice is one task of fixed shape, so cell values do not
    depend on how tasks are spread over threads; ties go to the smallest
    (beta1, beta2, y1).
    """
    _check_c(c)
    b1s, b2s, ys = grid.beta1_values, grid.beta2_values, grid.y1_values
    if min(b1s.size, b2s.size, ys.size) == 0:
        raise InvalidArgument("empty grid")
    n = resolve_workers(workers)

    def task(b1):
        return _best_in_slice(d, float(b1), b2s, ys, c)

    if n == 1:
        results = [task(b1) for b1 in b1s]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(task, b1s))

    best_i = 0
    for i, r in enumerate(results):
        if r[0] > results[best_i][0]:
            best_i = i
    v, j, k, alpha, u, sigma = results[best_i]
    w = WelfarePoint(u, sigma, v, c, alpha)
    return TwoBracketOptimum(float(b1s[best_i]), float(b2s[j]), float(ys[k]), w)


def frontier_two_bracket(c_values: Sequence[float], d: SkillDistribution,
                         grid: GridSpec = GridSpec(), workers: Optional[int] = None) -> FrontierCurve:
    """One grid optimum per c, ordered by c: the (sigma_u, U) locus."""
    if len(c_values) == 0:
        raise InvalidArgument("need at least one c value")
    curve = FrontierCurve("two-bracket-c-sweep")
    for c in sorted(float(x) for x in c_values):
        opt = optimize_two_bracket(c, d, grid, workers)
        w = opt.welfare
        curve.samples.append(FrontierSample(c, c, opt.beta1, opt.beta2, opt.y1,
                                            w.alpha, w.U, w.sigma_u, w.V))
    return curve


def dominating_cells(u0: float, sigma0: float, u: np.ndarray, sigma: np.ndarray) -> int:
    """Number of grid cells with strictly higher U and strictly lower sigma_u."""
    return int(np.count_nonzero((u > u0) & (sigma < sigma0)))
