"""Economic parameters, price models, normalizations and the R(Y) transform.

Time is dimensionless throughout. Three different quantities are called
"mu" in the growth literature; here they are kept apart as
``GrowthParams.rate`` (m/v), ``LogisticNormalization.mu`` (memory weight)
and ``MittagLefflerC.mu`` (order of the forcing's Mittag-Leffler function).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from .special import MlParams, gamma_fn, mittag_leffler

__all__ = [
    "ParameterError",
    "FractionalOrder",
    "GrowthParams",
    "LinearPrice",
    "CustomPrice",
    "OutputFunction",
    "ConstantG",
    "PowerG",
    "GCase",
    "BurstOnly",
    "Mixed",
    "PriceSpec",
    "ConstantC",
    "PowerC",
    "MittagLefflerC",
    "ForcingSpec",
    "LogisticNormalization",
    "normalize_standard",
    "normalize_memory",
    "r_transform",
    "r_inverse",
    "r_slope",
    "burst_ratio",
]


class ParameterError(ValueError):
    """A model parameter violates its domain; carries the offending key."""

    def __init__(self, key: str, constraint: str, value=None):
        self.key = key
        self.constraint = constraint
        self.value = value
        got = "" if value is None else f" (got {value!r})"
        super().__init__(f"{key}: must satisfy {constraint}{got}")


def _require(ok: bool, key: str, constraint: str, value) -> None:
    if not ok:
        raise ParameterError(key, constraint, value)


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


@dataclass(frozen=True)
class FractionalOrder:
    """Order ``alpha > 0`` with its integer bracket ``N - 1 < alpha <= N``."""

    value: float

    def __post_init__(self):
        _require(_finite(self.value) and self.value > 0, "alpha", "alpha > 0", self.value)
        object.__setattr__(self, "value", float(self.value))

    @property
    def bracket_n(self) -> int:
        if self.value.is_integer():
            return int(self.value)
        return math.floor(self.value) + 1

    @property
    def is_integer(self) -> bool:
        return self.value.is_integer()


@dataclass(frozen=True)
class GrowthParams:
    """Net-investment norm ``m``, accelerator ``v``, kick period ``T``, memory order."""

    m: float
    v: float
    T: float
    alpha: FractionalOrder

    def __post_init__(self):
        if not isinstance(self.alpha, FractionalOrder):
            object.__setattr__(self, "alpha", FractionalOrder(self.alpha))
        _require(_finite(self.m) and 0 < self.m < 1, "m", "0 < m < 1", self.m)
        _require(_finite(self.v) and self.v > 0, "v", "v > 0", self.v)
        _require(_finite(self.T) and self.T > 0, "T", "T > 0", self.T)

    @property
    def rate(self) -> float:
        """m / v."""
        return self.m / self.v

    @property
    def n(self) -> int:
        return self.alpha.bracket_n

    def memory_coefficient(self, s: int = 0) -> float:
        """``m T^(alpha-s) / (v Gamma(alpha-s))``, the weight of the burst sum."""
        a = self.alpha.value - s
        return self.m * self.T**a / (self.v * gamma_fn(a))


# --- output (burst) functions -------------------------------------------------


@dataclass(frozen=True)
class LinearPrice:
    """F(Y) = a*Y - b."""

    a: float
    b: float

    def __post_init__(self):
        _require(_finite(self.a), "a", "a finite", self.a)
        _require(_finite(self.b), "b", "b finite", self.b)

    def __call__(self, y: float) -> float:
        return self.a * y - self.b


@dataclass(frozen=True)
class CustomPrice:
    """Arbitrary pointwise F(Y); must be continuous at the kick instants."""

    func: Callable[[float], float]
    name: str = "custom"

    def __call__(self, y: float) -> float:
        return float(self.func(y))


OutputFunction = Union[LinearPrice, CustomPrice]


# --- continuous price part G(Y) and the R transform ---------------------------


@dataclass(frozen=True)
class ConstantG:
    """G(Y) = P0; R = ln Y with C = P0."""

    P0: float

    def __post_init__(self):
        _require(_finite(self.P0) and self.P0 > 0, "P0", "P0 > 0", self.P0)

    def __call__(self, y: float) -> float:
        return self.P0

    @property
    def C(self) -> float:
        return self.P0


@dataclass(frozen=True)
class PowerG:
    """G(Y) = rho * Y**j; R = -(1/j) * Y**(-j) with C = rho. ``j = 1`` is the linear case."""

    rho: float
    j: float

    def __post_init__(self):
        _require(_finite(self.rho) and self.rho != 0, "rho", "rho != 0", self.rho)
        _require(_finite(self.j) and self.j != 0, "j", "j != 0", self.j)

    def __call__(self, y: float) -> float:
        return self.rho * y**self.j

    @property
    def C(self) -> float:
        return self.rho


GCase = Union[ConstantG, PowerG]


def r_transform(g: GCase, y: float) -> float:
    """R(y), normalized so that dR/dt between bursts equals p*(m/v)*C."""
    _require(y > 0, "y", "y > 0", y)
    if isinstance(g, ConstantG):
        return math.log(y)
    return -(y ** (-g.j)) / g.j


def r_inverse(g: GCase, r: float) -> float:
    if isinstance(g, ConstantG):
        return math.exp(r)
    base = -g.j * r
    if not base > 0:
        raise ParameterError("r", f"-j*r > 0 for PowerG(j={g.j:g})", r)
    return base ** (-1.0 / g.j)


def r_slope(g: GCase, y: float) -> float:
    """dR/dY at ``y``; used to carry a first derivative Y' into R'."""
    _require(y > 0, "y", "y > 0", y)
    if isinstance(g, ConstantG):
        return 1.0 / y
    return y ** (-g.j - 1.0)


def burst_ratio(g: GCase, f: OutputFunction, y: float) -> float:
    """Burst term F_G(Y) in the same normalization as :func:`r_transform`."""
    if isinstance(g, ConstantG):
        return f(y)
    return f(y) * y ** (-g.j)


# --- price specifications ------------------------------------------------------


@dataclass(frozen=True)
class BurstOnly:
    """Price vanishes between bursts: P(Y) = -F(Y) * sum_k delta(t/T - k)."""

    F: OutputFunction


@dataclass(frozen=True)
class Mixed:
    """P(Y) = p*G(Y) - q*F(Y) * sum_k delta(t/T - k) with q = 1 - p."""

    p: float
    G: GCase
    F: OutputFunction
    q: float | None = None

    def __post_init__(self):
        _require(_finite(self.p) and 0 <= self.p <= 1, "p", "0 <= p <= 1", self.p)
        if self.q is None:
            object.__setattr__(self, "q", 1.0 - self.p)
        _require(_finite(self.q) and 0 <= self.q <= 1, "q", "0 <= q <= 1", self.q)
        _require(abs(self.p + self.q - 1.0) <= 1e-12, "q", "p + q = 1", self.q)


PriceSpec = Union[BurstOnly, Mixed]


# --- forcing C(t) ---------------------------------------------------------------


@dataclass(frozen=True)
class ConstantC:
    C: float

    def __post_init__(self):
        _require(_finite(self.C), "C", "C finite", self.C)

    def __call__(self, t: float) -> float:
        return self.C


@dataclass(frozen=True)
class PowerC:
    """C(t) = C * t**beta, beta > -1."""

    C: float
    beta: float

    def __post_init__(self):
        _require(_finite(self.C), "C", "C finite", self.C)
        _require(_finite(self.beta) and self.beta > -1, "beta", "beta > -1", self.beta)

    def __call__(self, t: float) -> float:
        return self.C * t**self.beta


@dataclass(frozen=True)
class MittagLefflerC:
    """C(t) = C * t**(beta-1) * E_{mu,beta}(gamma * t**mu)."""

    C: float
    beta: float
    mu: float
    gamma: float = 0.0

    def __post_init__(self):
        _require(_finite(self.C), "C", "C finite", self.C)
        _require(_finite(self.beta) and self.beta > 0, "beta", "beta > 0", self.beta)
        _require(_finite(self.mu) and self.mu > 0, "mu", "mu > 0", self.mu)
        _require(_finite(self.gamma), "gamma", "gamma finite", self.gamma)

    def __call__(self, t: float) -> float:
        return self.C * t ** (self.beta - 1) * mittag_leffler(
            MlParams(self.mu, self.beta), self.gamma * t**self.mu
        )


ForcingSpec = Union[ConstantC, PowerC, MittagLefflerC]


# --- logistic normalizations ------------------------------------------------------


@dataclass(frozen=True)
class LogisticNormalization:
    """Z = scale * Y turns the linear-price burst map into logistic form.

    ``lam`` and ``mu`` are the growth and memory weights, ``eta`` the
    history nonlinearity (``lam / mu``; undefined when ``b == 0``).
    """

    alpha: float
    lam: float
    mu: float
    eta: float | None
    scale: float


def _check_linear(f) -> None:
    if not isinstance(f, LinearPrice):
        raise TypeError("normalization needs a LinearPrice output function")
    _require(f.a != 0, "a", "a != 0", f.a)


def normalize_standard(g: GrowthParams, f: LinearPrice) -> LogisticNormalization:
    """Memoryless normalization: lambda = 1 + m b T / v, Z = m a T / (v + m b T) * Y."""
    _check_linear(f)
    denom = g.v + g.m * f.b * g.T
    if denom == 0:
        raise ZeroDivisionError("v + m*b*T == 0: normalization undefined")
    growth = g.m * f.b * g.T / g.v
    return LogisticNormalization(
        alpha=1.0,
        lam=1.0 + growth,
        mu=growth,
        eta=(1.0 + growth) / growth if growth != 0 else None,
        scale=g.m * f.a * g.T / denom,
    )


def normalize_memory(g: GrowthParams, f: LinearPrice) -> LogisticNormalization:
    """Normalization of the memory map for ``0 < alpha <= 1``; needs ``b != 0``."""
    _check_linear(f)
    _require(f.b != 0, "b", "b != 0 (use the raw map when b == 0)", f.b)
    alpha = g.alpha.value
    _require(alpha <= 1, "alpha", "0 < alpha <= 1 for the logistic memory map", alpha)
    vg = g.v * gamma_fn(alpha)
    mbt = g.m * f.b * g.T**alpha
    mu = mbt / vg
    return LogisticNormalization(
        alpha=alpha,
        lam=1.0 + mu,
        mu=mu,
        eta=(vg + mbt) / mbt,
        scale=g.m * f.a * g.T**alpha / (vg + mbt),
    )
