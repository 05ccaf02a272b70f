"""Skill distributions: exact uniform moments and quadrature over sub-intervals."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import InvalidArgument, NumericDomainError, QuadratureError

DEFAULT_RTOL = 1e-12

# Exponents with exact antiderivatives on the uniform fast path.
_POWERS = (0, 1, 2, 4, -2, -4)


@dataclass(frozen=True)
class SkillDistribution:
    """Density of the skill variable N on a bounded support [lo, hi].

    ``kind`` is ``"uniform"`` or ``"density"``; the latter carries a
    user-supplied ``pdf`` callable.  ``rtol`` is the relative tolerance
    handed to the adaptive quadrature.
    """

    kind: str
    lo: float
    hi: float
    pdf: Optional[Callable[[float], float]] = field(default=None, compare=False, repr=False)
    rtol: float = DEFAULT_RTOL

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidArgument("support must be bounded")
        if self.lo < 0 or self.hi <= self.lo:
            raise InvalidArgument(f"invalid support [{self.lo}, {self.hi}]")
        if not (0 < self.rtol < 1e-3):
            raise InvalidArgument(f"quadrature rtol out of range: {self.rtol}")
        if self.kind == "uniform":
            if self.pdf is not None:
                raise InvalidArgument("uniform distribution takes no pdf")
        elif self.kind == "density":
            if self.pdf is None:
                raise InvalidArgument("density distribution needs a pdf")
        else:
            raise InvalidArgument(f"unknown distribution kind {self.kind!r}")

    @classmethod
    def uniform(cls, a: float, b: float, rtol: float = DEFAULT_RTOL) -> "SkillDistribution":
        return cls("uniform", float(a), float(b), rtol=rtol)

    @classmethod
    def from_density(cls, pdf: Callable[[float], float], lo: float, hi: float,
                     rtol: float = DEFAULT_RTOL) -> "SkillDistribution":
        """Wrap a density on [lo, hi]; it must integrate to one within 1e-10."""
        d = cls("density", float(lo), float(hi), pdf=pdf, rtol=rtol)
        mass = _quad(lambda n: 1.0, d, d.lo, d.hi)
        if abs(mass - 1.0) > 1e-10:
            raise InvalidArgument(f"density integrates to {mass!r}, not 1")
        return d

    @property
    def is_uniform(self) -> bool:
        return self.kind == "uniform"

    def density(self, n):
        n = np.asarray(n, dtype=float)
        inside = (n >= self.lo) & (n <= self.hi)
        if self.is_uniform:
            out = np.where(inside, 1.0 / (self.hi - self.lo), 0.0)
        else:
            out = np.where(inside, np.vectorize(self.pdf, otypes=[float])(n), 0.0)
        return out[()] if out.ndim == 0 else out

    def __str__(self):
        if self.is_uniform:
            return f"uniform:{self.lo:g}:{self.hi:g}"
        return f"density:{self.lo:g}:{self.hi:g}"


def parse_distribution(spec: str, rtol: float = DEFAULT_RTOL) -> SkillDistribution:
    """Parse a CLI distribution string such as ``"uniform:0:10"``."""
    parts = spec.strip().split(":")
    if len(parts) != 3 or parts[0] != "uniform":
        raise InvalidArgument(f"bad distribution spec {spec!r}; expected uniform:<a>:<b>")
    try:
        a, b = float(parts[1]), float(parts[2])
    except ValueError:
        raise InvalidArgument(f"bad distribution bounds in {spec!r}") from None
    return SkillDistribution.uniform(a, b, rtol=rtol)


def moment(d: SkillDistribution, k: int) -> float:
    """E[N**k] for k in {1, 2, 4}."""
    if k not in (1, 2, 4):
        raise InvalidArgument(f"unsupported moment order {k!r}")
    if d.is_uniform:
        a, b = d.lo, d.hi
        return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))
    return expect(d, lambda n: n**k, d.lo, d.hi)


def n2_moments(d: Optional[SkillDistribution]) -> tuple[float, float]:
    """Return (E[N^2], sd(N^2)); ``None`` stands for unit-normalised moments."""
    if d is None:
        return 1.0, 1.0
    m2 = moment(d, 2)
    return m2, math.sqrt(max(moment(d, 4) - m2 * m2, 0.0))


def _clamp(d: SkillDistribution, lo: float, hi: float) -> tuple[float, float]:
    return max(lo, d.lo), min(hi, d.hi)


def _quad(g: Callable[[float], float], d: SkillDistribution, lo: float, hi: float,
          atol: float = 0.0) -> float:
    if d.is_uniform:
        w = 1.0 / (d.hi - d.lo)
        f = g
    else:
        w = 1.0
        pdf = d.pdf

        def f(n):
            return g(n) * pdf(n)

    def checked(n):
        v = f(n)
        if not math.isfinite(v):
            raise NumericDomainError(f"integrand is not finite at n={n!r}")
        return v

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(checked, lo, hi, epsabs=atol, epsrel=d.rtol, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature on [{lo}, {hi}] did not converge: {exc}") from None
    return w * val


def expect(d: SkillDistribution, g: Callable[[float], float], lo: float = -math.inf,
           hi: float = math.inf, atol: float = 0.0) -> float:
    """Integral of g(n) f(n) over [lo, hi] intersected with the support.

    Assumes g is smooth on the interval; split at kinks before calling.
    Integrals that should vanish (budget residuals) need a positive
    ``atol``, since a relative tolerance cannot be met at zero.
    """
    lo, hi = _clamp(d, lo, hi)
    if lo >= hi:
        return 0.0
    return _quad(g, d, lo, hi, atol * (d.hi - d.lo) if d.is_uniform else atol)


def power_integral(d: SkillDistribution, k: int, lo, hi):
    """Integral of n**k f(n) over [lo, hi] clamped to the support, vectorised.

    Uniform distributions use exact antiderivatives built from products
    (no ``pow``) so results are elementwise-reproducible; other densities
    fall back to quadrature per element.
    """
    if k not in _POWERS:
        raise InvalidArgument(f"unsupported power {k!r}")
    lo = np.clip(np.asarray(lo, dtype=float), d.lo, d.hi)
    hi = np.clip(np.asarray(hi, dtype=float), d.lo, d.hi)
    hi = np.maximum(hi, lo)
    if not d.is_uniform:
        out = np.vectorize(lambda a, b: expect(d, lambda n: n**k, a, b), otypes=[float])(lo, hi)
        return out[()] if out.ndim == 0 else out

    w = 1.0 / (d.hi - d.lo)
    with np.errstate(divide="ignore", invalid="ignore"):
        if k == 0:
            out = hi - lo
        elif k == 1:
            out = (hi * hi - lo * lo) / 2.0
        elif k == 2:
            out = (hi * hi * hi - lo * lo * lo) / 3.0
        elif k == 4:
            h2, l2 = hi * hi, lo * lo
            out = (h2 * h2 * hi - l2 * l2 * lo) / 5.0
        elif k == -2:
            out = 1.0 / lo - 1.0 / hi
        else:
            out = (1.0 / (lo * lo * lo) - 1.0 / (hi * hi * hi)) / 3.0
        # empty intervals contribute nothing, including at lo = hi = 0
        out = np.where(hi > lo, out, 0.0) * w
    return out[()] if out.ndim == 0 else out


def expect_many(d: SkillDistribution, g: Callable[[np.ndarray], np.ndarray], lo, hi) -> np.ndarray:
    """Vectorised ``expect`` for a family of integrands sharing one adaptive pass.

    ``g(n)`` receives an array of skill points, one per family member, and
    returns an array of the same shape; ``lo``/``hi`` are per-member bounds.
    Only the uniform family is supported.
    """
    if not d.is_uniform:
        raise InvalidArgument("expect_many supports uniform distributions only")
    lo, hi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in _clamp_many(d, lo, hi)))
    width = np.maximum(hi - lo, 0.0)

    def mapped(t):
        v = g(lo + width * t)
        if not np.all(np.isfinite(v)):
            raise NumericDomainError(f"integrand is not finite at t={t!r}")
        return v

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad_vec(mapped, 0.0, 1.0, epsabs=0.0, epsrel=d.rtol,
                                        norm="max", limit=2000)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"vector quadrature did not converge: {exc}") from None
    return val * width / (d.hi - d.lo)


def _clamp_many(d, lo, hi):
    return np.maximum(lo, d.lo), np.minimum(hi, d.hi)
