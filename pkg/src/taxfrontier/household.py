"""Optimal effort of a skill-n household under u(c, l) = c - l**2 / 2."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import InvalidArgument
from .schedule import TaxPolicy, tax_at


@dataclass(frozen=True)
class HouseholdOutcome:
    l_star: float
    y_star: float
    u_star: float
    t_star: float


def quadratic_utility(p: TaxPolicy, n: float, l):
    """Utility of effort l (scalar or array) for skill n under policy p."""
    y = n * np.asarray(l, dtype=float)
    return y - tax_at(p, y) - 0.5 * np.square(l)


def respond_quadratic(p: TaxPolicy, n: float) -> HouseholdOutcome:
    """Closed-form household optimum.

    Concave schedules (beta1 < beta2) switch from the first to the second
    bracket at n3; convex ones (beta1 > beta2) bunch at the kink for
    n in [n1, n2].  At a regime boundary the lower regime is reported.
    """
    if not n >= 0:
        raise InvalidArgument(f"skill must be nonnegative, got {n!r}")
    a, b1, b2, y1 = p.alpha, p.beta1, p.beta2, p.y1

    def first():
        return b1 * n, a + 0.5 * b1 * b1 * n * n, -a + (1 - b1) * b1 * n * n

    def second():
        return (b2 * n,
                a + 0.5 * b2 * b2 * n * n - y1 * (b2 - b1),
                -a + (1 - b2) * b2 * n * n + (b2 - b1) * y1)

    def kink():
        return y1 / n, a + b1 * y1 - y1 * y1 / (2 * n * n), -a + (1 - b1) * y1

    if b1 == b2:
        l, u, t = first()
    elif b1 < b2:
        n3 = math.sqrt(2 * y1 / (b1 + b2))
        l, u, t = first() if n <= n3 else second()
    else:
        n1 = math.sqrt(y1 / b1)
        n2 = math.sqrt(y1 / b2) if b2 > 0 else math.inf
        if n <= n1:
            l, u, t = first()
        elif n <= n2:
            l, u, t = kink()
        else:
            l, u, t = second()
    return HouseholdOutcome(l, n * l, u, t)


def respond_oracle(p: TaxPolicy, n: float, l_hi: float | None = None,
                   step: float = 1e-3) -> HouseholdOutcome:
    """Brute-force optimum: effort grid search, then a bounded 1-D refinement.

    Only ``tax_at`` is used, so this is independent of the closed forms.
    """
    if not n >= 0:
        raise InvalidArgument(f"skill must be nonnegative, got {n!r}")
    if step <= 0:
        raise InvalidArgument("step must be positive")
    need = max(p.beta1, p.beta2) * n + 1.0
    if l_hi is None:
        l_hi = need
    elif l_hi < need:
        raise InvalidArgument(f"effort cap {l_hi} below {need}")

    grid = np.arange(int(math.floor(l_hi / step)) + 1) * step
    if grid[-1] < l_hi:
        grid = np.append(grid, l_hi)
    vals = quadratic_utility(p, n, grid)
    i = int(np.argmax(vals))
    best_l, best_u = float(grid[i]), float(vals[i])

    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(lambda l: -float(quadratic_utility(p, n, l)),
                                       bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        if -res.fun > best_u:
            best_l, best_u = float(res.x), float(-res.fun)
    y = n * best_l
    return HouseholdOutcome(best_l, y, best_u, float(tax_at(p, y)))
