"""Distributions of the adoption threshold delta = pA / (pA + pB).

A node with ``d`` influencing neighbors switches once at least ``delta * d``
of them have switched. Each :class:`ThresholdModel` fixes the CDF of delta;
everything downstream (sampling, integer requirements, the exact oracle)
is derived from that CDF.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Variant(enum.IntEnum):
    LINEAR = 0
    CONCAVE_SQUARE = 1
    CONVEX_SQRT = 2
    CONSTANT = 3
    POWER_LAW = 4


class Concavity(enum.Enum):
    CONCAVE_CONTINUOUS_INCREASING = "concave"
    NOT_CONCAVE = "not concave"
    DISCONTINUOUS = "discontinuous"


@dataclass(frozen=True)
class ThresholdModel:
    """Threshold distribution.

    ``param`` is delta0 for ``CONSTANT`` and gamma for ``POWER_LAW``;
    unused otherwise.

    ========================  ==================  ====================
    variant                   F(x)                delta for U~U[0,1]
    ========================  ==================  ====================
    LINEAR                    x                   U
    CONCAVE_SQUARE            sqrt(x)             U**2
    CONVEX_SQRT               x**2                sqrt(U)
    CONSTANT(d0)              1[x >= d0]          d0
    POWER_LAW(gamma)          x**(gamma-1)        U**(1/(gamma-1))
    ========================  ==================  ====================
    """

    variant: Variant
    param: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.CONSTANT and not 0.0 < self.param <= 1.0:
            raise ValueError(f"constant threshold must lie in (0, 1], got {self.param}")
        if self.variant is Variant.POWER_LAW and not self.param > 1.0:
            raise ValueError(f"power-law gamma must exceed 1, got {self.param}")

    @classmethod
    def linear(cls) -> "ThresholdModel":
        return cls(Variant.LINEAR)

    @classmethod
    def concave(cls) -> "ThresholdModel":
        return cls(Variant.CONCAVE_SQUARE)

    @classmethod
    def convex(cls) -> "ThresholdModel":
        return cls(Variant.CONVEX_SQRT)

    @classmethod
    def constant(cls, delta0: float) -> "ThresholdModel":
        return cls(Variant.CONSTANT, float(delta0))

    @classmethod
    def majority(cls) -> "ThresholdModel":
        return cls(Variant.CONSTANT, 0.5)

    @classmethod
    def power_law(cls, gamma: float) -> "ThresholdModel":
        return cls(Variant.POWER_LAW, float(gamma))

    @property
    def continuous(self) -> bool:
        return self.variant is not Variant.CONSTANT

    def cdf(self, x):
        return cdf(self, x)

    def inverse_cdf(self, u):
        return inverse_cdf(self, u)

    @property
    def spec(self) -> str:
        v = self.variant
        if v is Variant.CONSTANT:
            return f"majority:{self.param:g}"
        if v is Variant.POWER_LAW:
            return f"powerlaw:{self.param:g}"
        return {Variant.LINEAR: "linear", Variant.CONCAVE_SQUARE: "concave",
                Variant.CONVEX_SQRT: "convex"}[v]

    def __str__(self) -> str:
        return self.spec


def parse_model(spec: str) -> ThresholdModel:
    """Parse ``linear``, ``concave``, ``convex``, ``majority:<d0>``, ``powerlaw:<gamma>``."""
    s = spec.strip().lower()
    name, _, arg = s.partition(":")
    simple = {"linear": ThresholdModel.linear, "concave": ThresholdModel.concave,
              "convex": ThresholdModel.convex}
    if name in simple and not arg:
        return simple[name]()
    try:
        if name == "majority":
            return ThresholdModel.constant(float(arg) if arg else 0.5)
        if name == "powerlaw" and arg:
            return ThresholdModel.power_law(float(arg))
    except ValueError as exc:
        raise ValueError(f"bad model spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown model spec {spec!r}")


def cdf(model: ThresholdModel, x):
    """F(x) = Pr[delta <= x] for x in [0, 1]; accepts scalars or arrays."""
    xa = np.asarray(x, dtype=float)
    if np.any((xa < 0.0) | (xa > 1.0)) or np.any(np.isnan(xa)):
        raise ValueError("cdf argument must lie in [0, 1]")
    v = model.variant
    if v is Variant.LINEAR:
        out = xa.copy()
    elif v is Variant.CONCAVE_SQUARE:
        out = np.sqrt(xa)
    elif v is Variant.CONVEX_SQRT:
        out = xa * xa
    elif v is Variant.CONSTANT:
        out = (xa >= model.param).astype(float)
    else:
        out = xa ** (model.param - 1.0)
    return float(out) if np.ndim(out) == 0 else out


def inverse_cdf(model: ThresholdModel, u):
    """Quantile function used for inverse-CDF sampling."""
    ua = np.asarray(u, dtype=float)
    v = model.variant
    if v is Variant.LINEAR:
        out = ua.copy()
    elif v is Variant.CONCAVE_SQUARE:
        out = ua * ua
    elif v is Variant.CONVEX_SQRT:
        out = np.sqrt(ua)
    elif v is Variant.CONSTANT:
        out = np.full_like(ua, model.param)
    else:
        out = ua ** (1.0 / (model.param - 1.0))
    return float(out) if np.ndim(out) == 0 else out


def sample_threshold(model: ThresholdModel, rng) -> float:
    """Draw one delta. The constant variant consumes no randomness."""
    if model.variant is Variant.CONSTANT:
        return model.param
    return inverse_cdf(model, rng.random())


def sample_thresholds(model: ThresholdModel, rng, size: int) -> np.ndarray:
    """``size`` i.i.d. draws; element ``i`` equals the ``i``-th sequential draw."""
    if model.variant is Variant.CONSTANT:
        return np.full(size, model.param)
    return inverse_cdf(model, rng.random(size))


def delta_from_payoffs(pA: float, pB: float) -> float:
    """Threshold implied by the payoffs of coordinating on A and on B."""
    if not (pA > 0 and pB > 0):
        raise ValueError("payoffs must be strictly positive")
    return pA / (pA + pB)


def is_concave_cdf(model: ThresholdModel) -> Concavity:
    """Analytic concavity judgment per variant."""
    v = model.variant
    if v is Variant.CONSTANT:
        return Concavity.DISCONTINUOUS
    if v is Variant.CONVEX_SQRT or (v is Variant.POWER_LAW and model.param > 2.0):
        return Concavity.NOT_CONCAVE
    return Concavity.CONCAVE_CONTINUOUS_INCREASING


def numeric_concavity(model: ThresholdModel, points: int = 1000, tol: float = 1e-9) -> bool:
    """Midpoint test F((a+b)/2) >= (F(a)+F(b))/2 over all grid pairs.

    Cross-check for :func:`is_concave_cdf`; not authoritative.
    """
    x = np.linspace(0.0, 1.0, points)
    F = cdf(model, x)
    for i in range(points):
        mid = cdf(model, (x[i] + x[i:]) / 2.0)
        if np.any(mid < (F[i] + F[i:]) / 2.0 - tol):
            return False
    return True


def requirement_of(delta, degree):
    """Least integer count k with k >= delta * degree, at least 1.

    Degree-0 nodes get requirement 1: with no neighbors they only activate
    when seeded. ``delta == 0`` has probability zero for every supported
    variant and is treated like an infinitesimal positive threshold.
    """
    m = np.ceil(np.asarray(delta, dtype=float) * np.asarray(degree, dtype=float)).astype(np.int64)
    m = np.maximum(m, 1)
    return int(m) if np.ndim(m) == 0 else m


def requirement_distribution(model: ThresholdModel, degree: int) -> np.ndarray:
    """p[k] = Pr[requirement == k] for k = 0..degree."""
    degree = int(degree)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    p = np.zeros(degree + 1)
    if model.variant is Variant.CONSTANT:
        p[requirement_of(model.param, degree)] = 1.0
        return p
    F = cdf(model, np.arange(degree + 1) / degree)
    p[1:] = np.diff(F)
    # guard against tiny negative rounding in the differences
    np.clip(p, 0.0, None, out=p)
    p[1:] /= p[1:].sum()
    return p


def activates(active_count, delta, degree) -> bool:
    """Direct real-valued adoption rule: count >= delta * degree (ties adopt)."""
    if degree == 0:
        return False
    return active_count >= delta * degree
