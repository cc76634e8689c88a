"""Closed-form natural growth with memory (constant price, no bursts)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .econ import FractionalOrder, GrowthParams, ParameterError
from .special import MlParams, mittag_leffler

__all__ = ["NaturalGrowthProblem", "natural_growth", "natural_growth_solution", "sample_natural_growth"]


@dataclass(frozen=True)
class NaturalGrowthProblem:
    g: GrowthParams
    P: float
    init_derivs: tuple[float, ...]

    def __post_init__(self):
        if not self.P > 0:
            raise ParameterError("P", "P > 0", self.P)
        object.__setattr__(self, "init_derivs", tuple(float(v) for v in self.init_derivs))
        if len(self.init_derivs) != self.g.n:
            raise ParameterError(
                "init_derivs", f"{self.g.n} values for alpha={self.g.alpha.value:g}", self.init_derivs
            )

    @property
    def rate(self) -> float:
        """m * P / v."""
        return self.g.m * self.P / self.g.v


def natural_growth(alpha: float, rate: float, init_derivs: Sequence[float], t: float) -> float:
    """Y(t) = sum_k Y^(k)(0) t^k E_{alpha,k+1}(rate * t^alpha), k < N."""
    order = FractionalOrder(alpha)
    if len(init_derivs) != order.bracket_n:
        raise ParameterError("init_derivs", f"{order.bracket_n} values for alpha={alpha:g}", list(init_derivs))
    if not t >= 0:
        raise ParameterError("t", "t >= 0", t)
    z = rate * t**alpha
    total = 0.0
    for k, yk in enumerate(init_derivs):
        if yk == 0.0 or (k and t == 0.0):
            continue
        total += yk * t**k * mittag_leffler(MlParams(alpha, k + 1.0), z)
    return total


def natural_growth_solution(prob: NaturalGrowthProblem, t: float) -> float:
    return natural_growth(prob.g.alpha.value, prob.rate, prob.init_derivs, t)


def sample_natural_growth(alpha, rate, init_derivs, t_max: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate on ``n`` evenly spaced points of [0, t_max]."""
    if n < 2:
        raise ParameterError("sample", "sample >= 2", n)
    ts = np.linspace(0.0, t_max, n)
    return ts, np.array([natural_growth(alpha, rate, init_derivs, float(t)) for t in ts])
