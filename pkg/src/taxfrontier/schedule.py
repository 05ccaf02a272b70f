"""Linear and one-kink piecewise-linear tax schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegeneratePolicyError, InvalidArgument


@dataclass(frozen=True)
class TaxPolicy:
    """Tax ``t(y)`` with subsidy ``alpha`` and retained shares ``beta1``/``beta2``.

    ``beta1`` applies below the kink income ``y1``, ``beta2`` above it.
    The marginal tax rate in each bracket is ``1 - beta``.
    """

    alpha: float
    beta1: float
    beta2: float
    y1: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta1", "beta2", "y1"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidArgument(f"{name} must be finite, got {v!r}")
        if not (0.0 <= self.beta1 <= 1.0 and 0.0 <= self.beta2 <= 1.0):
            raise InvalidArgument(f"retained shares must lie in [0, 1]: {self.beta1}, {self.beta2}")
        if self.alpha < 0:
            raise InvalidArgument(f"subsidy must be nonnegative, got {self.alpha}")
        if self.y1 < 0:
            raise InvalidArgument(f"kink income must be nonnegative, got {self.y1}")

    @classmethod
    def linear(cls, beta: float, alpha: float = 0.0) -> "TaxPolicy":
        return cls(alpha, beta, beta, 0.0)

    @property
    def is_linear(self) -> bool:
        return self.beta1 == self.beta2

    @property
    def is_convex(self) -> bool:
        """Marginal tax rate rises at the kink (beta1 >= beta2)."""
        return self.beta1 >= self.beta2

    def with_alpha(self, alpha: float) -> "TaxPolicy":
        return TaxPolicy(alpha, self.beta1, self.beta2, self.y1)


class RegimeThresholds(NamedTuple):
    n1: float
    n2: float
    n3: float


class PolicySpec(NamedTuple):
    """Parsed CLI policy: the subsidy is always derived, never given."""

    beta1: float
    beta2: float
    y1: float

    @property
    def is_linear(self) -> bool:
        return self.beta1 == self.beta2


def tax_at(p: TaxPolicy, y):
    """Tax owed at pre-tax income y (scalar or array).

    Income exactly at the kink is taxed by the first-bracket formula; both
    branches agree there.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise InvalidArgument("income must be nonnegative")
    first = -p.alpha + (1.0 - p.beta1) * y
    second = -p.alpha + (1.0 - p.beta1) * p.y1 + (1.0 - p.beta2) * (y - p.y1)
    out = np.where(y <= p.y1, first, second)
    return float(out) if out.ndim == 0 else out


def thresholds(p: TaxPolicy) -> RegimeThresholds:
    if p.y1 <= 0 or p.beta1 <= 0 or p.beta2 <= 0:
        raise DegeneratePolicyError(
            f"thresholds undefined for y1={p.y1}, beta1={p.beta1}, beta2={p.beta2}")
    return RegimeThresholds(
        math.sqrt(p.y1 / p.beta1),
        math.sqrt(p.y1 / p.beta2),
        math.sqrt(2.0 * p.y1 / (p.beta1 + p.beta2)),
    )


def regime_bounds(beta1, beta2, y1):
    """Skill cutoffs ``(lo_end, hi_start)`` separating the household regimes.

    Skills below ``lo_end`` choose an interior first-bracket effort, skills
    above ``hi_start`` an interior second-bracket effort, and skills in
    between (convex case only) sit exactly at the kink.  Zero retained
    shares give infinite cutoffs.  Equal shares yield ``(0, 0)`` so the
    whole population is treated by the second-bracket formulas, which then
    coincide with the linear ones.  Vectorised.
    """
    beta1, beta2, y1 = (np.asarray(v, dtype=float) for v in (beta1, beta2, y1))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        n1 = np.sqrt(y1 / beta1)
        n2 = np.sqrt(y1 / beta2)
        n3 = np.sqrt(2.0 * y1 / (beta1 + beta2))
    convex = beta1 > beta2
    lo_end = np.where(convex, n1, n3)
    hi_start = np.where(convex, n2, n3)
    linear = beta1 == beta2
    lo_end = np.where(linear, 0.0, lo_end)
    hi_start = np.where(linear, 0.0, hi_start)
    return lo_end, hi_start


def parse_policy(spec: str) -> PolicySpec:
    """Parse ``"linear:<beta>"`` or ``"twobracket:<beta1>:<beta2>:<y1>"``."""
    parts = spec.strip().split(":")
    if not ((parts[0] == "linear" and len(parts) == 2)
            or (parts[0] == "twobracket" and len(parts) == 4)):
        raise InvalidArgument(
            f"bad policy spec {spec!r}; expected linear:<beta> or "
            "twobracket:<beta1>:<beta2>:<y1>")
    try:
        nums = [float(x) for x in parts[1:]]
    except ValueError:
        raise InvalidArgument(f"bad number in policy spec {spec!r}") from None
    out = PolicySpec(nums[0], nums[0], 0.0) if len(nums) == 1 else PolicySpec(*nums)
    # validates ranges
    TaxPolicy(0.0, out.beta1, out.beta2, out.y1)
    if not out.is_linear and out.y1 <= 0:
        raise InvalidArgument("two-bracket policy needs y1 > 0")
    return out
