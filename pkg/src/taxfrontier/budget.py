"""Budget balance: the subsidy that makes total collected tax zero."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distribution import SkillDistribution, expect, moment
from .errors import InvalidArgument, NumericDomainError
from .household import respond_quadratic
from .moments import regime_moments, subsidy
from .schedule import TaxPolicy


@dataclass(frozen=True)
class BalancedPolicy:
    policy: TaxPolicy
    residual: float


def _check_share(name, v):
    if not 0.0 <= v <= 1.0:
        raise InvalidArgument(f"{name} must lie in [0, 1], got {v!r}")


def kink_points(p: TaxPolicy) -> list[float]:
    """Skill levels where the household response changes regime."""
    if p.is_linear or p.y1 == 0:
        return []
    pts = []
    if p.beta1 < p.beta2:
        pts.append(math.sqrt(2 * p.y1 / (p.beta1 + p.beta2)))
    else:
        pts.append(math.sqrt(p.y1 / p.beta1))
        if p.beta2 > 0:
            pts.append(math.sqrt(p.y1 / p.beta2))
    return pts


def integrate_over_skills(d: SkillDistribution, g, points=(), atol: float = 0.0) -> float:
    """Integral of g(n) f(n) over the support, split at the given points."""
    cuts = sorted({d.lo, d.hi, *(x for x in points if d.lo < x < d.hi)})
    return math.fsum(expect(d, g, a, b, atol) for a, b in zip(cuts, cuts[1:]))


def budget_residual(p: TaxPolicy, d: SkillDistribution) -> float:
    """Integral of the tax actually paid, by quadrature of household responses."""
    atol = 1e-14 * max(1.0, moment(d, 2))
    return integrate_over_skills(d, lambda n: respond_quadratic(p, n).t_star, kink_points(p), atol)


def _nonnegative(alpha: float, d: SkillDistribution) -> float:
    # each budget term is nonnegative; only rounding can push the sum below zero
    if alpha < 0:
        if alpha < -1e-12 * max(1.0, moment(d, 2)):
            raise NumericDomainError(f"negative balancing subsidy {alpha!r}")
        return 0.0
    return alpha


def balance_linear(beta: float, d: SkillDistribution) -> BalancedPolicy:
    _check_share("beta", beta)
    alpha = (1.0 - beta) * beta * moment(d, 2)
    p = TaxPolicy.linear(beta, alpha)
    return BalancedPolicy(p, budget_residual(p, d))


def two_bracket_subsidy(beta1: float, beta2: float, y1: float, d: SkillDistribution) -> float:
    """Balancing subsidy without the residual check (cheap)."""
    _check_share("beta1", beta1)
    _check_share("beta2", beta2)
    if not (y1 > 0 and math.isfinite(y1)):
        raise InvalidArgument(f"kink income must be positive, got {y1!r}")
    m = regime_moments(d, beta1, beta2, y1)
    return _nonnegative(float(subsidy(m, beta1, beta2, y1)), d)


def balance_two_bracket(beta1: float, beta2: float, y1: float,
                        d: SkillDistribution) -> BalancedPolicy:
    """Subsidy from the regime-split budget constraint.

    Concave schedules split the population at n3; convex ones at n1 and
    n2, with households in [n1, n2] paying (1 - beta1) y1 at the kink.
    """
    alpha = two_bracket_subsidy(beta1, beta2, y1, d)
    p = TaxPolicy(alpha, beta1, beta2, y1)
    return BalancedPolicy(p, budget_residual(p, d))
