"""Regime-split integrals shared by budget balance, welfare and grid search.

Every aggregate of the quadratic-utility model is a linear combination of
integrals of n**k f(n) over the three household regimes:

* first bracket, ``[0, lo_end]``: powers 2 and 4,
* kink (convex schedules only), ``[lo_end, hi_start]``: powers 0, -2, -4,
* second bracket, ``[hi_start, inf)``: powers 0, 2 and 4.

All functions broadcast over arrays of (beta1, beta2, y1).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .distribution import SkillDistribution, power_integral
from .schedule import regime_bounds


class RegimeMoments(NamedTuple):
    first2: np.ndarray
    first4: np.ndarray
    kink0: np.ndarray
    kink_m2: np.ndarray
    kink_m4: np.ndarray
    second0: np.ndarray
    second2: np.ndarray
    second4: np.ndarray


def regime_moments(d: SkillDistribution, beta1, beta2, y1) -> RegimeMoments:
    lo_end, hi_start = regime_bounds(beta1, beta2, y1)
    top = d.hi
    return RegimeMoments(
        power_integral(d, 2, 0.0, lo_end),
        power_integral(d, 4, 0.0, lo_end),
        power_integral(d, 0, lo_end, hi_start),
        power_integral(d, -2, lo_end, hi_start),
        power_integral(d, -4, lo_end, hi_start),
        power_integral(d, 0, hi_start, top),
        power_integral(d, 2, hi_start, top),
        power_integral(d, 4, hi_start, top),
    )


def _kink_shift(beta1, beta2, y1):
    # second-bracket utility carries + y1 (beta1 - beta2); zero when linear
    return np.where(beta1 == beta2, 0.0, y1 * (beta1 - beta2))


def subsidy(m: RegimeMoments, beta1, beta2, y1):
    """Budget-balancing subsidy: the integral of (t_max + alpha) f."""
    k = _kink_shift(beta1, beta2, y1)
    return ((1 - beta1) * beta1 * m.first2
            + (1 - beta1) * y1 * m.kink0
            + (1 - beta2) * beta2 * m.second2 - k * m.second0)


def utility_moments(m: RegimeMoments, beta1, beta2, y1):
    """First and second moments of u_max - alpha."""
    k = _kink_shift(beta1, beta2, y1)
    b1sq, b2sq, ysq = beta1 * beta1, beta2 * beta2, y1 * y1
    g1 = (0.5 * b1sq * m.first2
          + beta1 * y1 * m.kink0 - 0.5 * ysq * m.kink_m2
          + 0.5 * b2sq * m.second2 + k * m.second0)
    g2 = (0.25 * b1sq * b1sq * m.first4
          + b1sq * ysq * m.kink0 - beta1 * ysq * y1 * m.kink_m2 + 0.25 * ysq * ysq * m.kink_m4
          + 0.25 * b2sq * b2sq * m.second4 + k * b2sq * m.second2 + k * k * m.second0)
    return g1, g2


def evaluate(d: SkillDistribution, beta1, beta2, y1, c):
    """Vectorised (alpha, U, sigma_u, V) for budget-balanced policies."""
    beta1, beta2, y1 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (beta1, beta2, y1)))
    m = regime_moments(d, beta1, beta2, y1)
    alpha = subsidy(m, beta1, beta2, y1)
    g1, g2 = utility_moments(m, beta1, beta2, y1)
    sigma = np.sqrt(np.maximum(g2 - g1 * g1, 0.0))
    u = alpha + g1
    return alpha, u, sigma, u - c * sigma
