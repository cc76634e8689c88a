"""Gamma, two-parameter Mittag-Leffler and the power-law memory kernel.

Everything here is a pure function of real scalars. The kernel helpers are
deliberately scalar-at-a-time so that tables and single evaluations agree
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GammaPoleError",
    "MittagLefflerError",
    "MittagLefflerRangeError",
    "MlParams",
    "KernelTable",
    "gamma_fn",
    "mittag_leffler",
    "kernel_v",
    "kernel_table",
    "power_table",
    "ML_MAX_ABS_Z",
    "ML_MIN_ALPHA",
]

# Validated region of the plain series.
ML_MAX_ABS_Z = 30.0
ML_MIN_ALPHA = 0.1
# Refuse results whose cancellation loss (sum|t_k| / |sum t_k| * eps) exceeds this.
_ML_MAX_CANCELLATION_ERROR = 1e-11
_EPS = np.finfo(float).eps


class GammaPoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


class MittagLefflerError(ArithmeticError):
    """Series did not reach its tolerance within ``max_terms``."""


class MittagLefflerRangeError(ValueError):
    """Argument lies outside the region where the series is trusted."""


def gamma_fn(x: float) -> float:
    """Gamma function for real ``x``.

    Raises :class:`GammaPoleError` at 0, -1, -2, ... and ``OverflowError``
    once the result is not representable (x > ~171.6).
    """
    x = float(x)
    if x <= 0.0 and x.is_integer():
        raise GammaPoleError(f"gamma has a pole at x={x:g}")
    try:
        return math.gamma(x)
    except OverflowError:
        raise OverflowError(f"gamma({x:g}) overflows double precision") from None


@dataclass(frozen=True)
class MlParams:
    alpha: float
    beta: float
    tol: float = 1e-14
    max_terms: int = 2000

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha: must be > 0 (got {self.alpha})")
        if not self.beta > 0:
            raise ValueError(f"beta: must be > 0 (got {self.beta})")
        if not 0 < self.tol < 1:
            raise ValueError(f"tol: must lie in (0, 1) (got {self.tol})")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms: must be a positive integer (got {self.max_terms})")


def _ml_term(k: int, log_abs_z: float, z: float, alpha: float, beta: float) -> float:
    arg = alpha * k + beta
    if arg < 170.0:
        try:
            return z**k / math.gamma(arg)
        except OverflowError:
            pass
    sign = -1.0 if (z < 0 and k % 2) else 1.0
    return sign * math.exp(k * log_abs_z - math.lgamma(arg))


def mittag_leffler(p: MlParams, z: float) -> float:
    r"""Two-parameter Mittag-Leffler function by direct series summation.

    .. math::

        E_{\alpha,\beta}(z) = \sum_{k\ge 0} \frac{z^k}{\Gamma(\alpha k + \beta)}

    Terms are added until the next one drops below ``p.tol`` times the
    running sum. Only real ``z`` with ``|z| <= 30`` and ``alpha >= 0.1`` are
    accepted, and results that lost more than ~1e-11 relative accuracy to
    cancellation (large negative arguments) are refused rather than returned.
    """
    z = float(z)
    if p.alpha < ML_MIN_ALPHA:
        raise MittagLefflerRangeError(
            f"alpha={p.alpha:g} below validated minimum {ML_MIN_ALPHA:g}"
        )
    if not abs(z) <= ML_MAX_ABS_Z:
        raise MittagLefflerRangeError(f"|z|={abs(z):g} exceeds validated range {ML_MAX_ABS_Z:g}")
    if z == 0.0:
        return 1.0 / gamma_fn(p.beta)

    log_abs_z = math.log(abs(z))
    terms = [_ml_term(0, log_abs_z, z, p.alpha, p.beta)]
    partial = terms[0]
    for k in range(1, int(p.max_terms) + 1):
        t = _ml_term(k, log_abs_z, z, p.alpha, p.beta)
        # log|t_k| is concave in k, so once a term is both small and shrinking
        # every later term is smaller still.
        if abs(t) < p.tol * abs(partial) and abs(t) <= abs(terms[-1]):
            break
        terms.append(t)
        partial += t
    else:
        raise MittagLefflerError(
            f"E_{{{p.alpha:g},{p.beta:g}}}({z:g}) not converged after {p.max_terms} terms"
        )

    total = math.fsum(terms)
    magnitude = math.fsum(abs(t) for t in terms)
    if total == 0.0 or magnitude / abs(total) * _EPS > _ML_MAX_CANCELLATION_ERROR:
        raise MittagLefflerRangeError(
            f"E_{{{p.alpha:g},{p.beta:g}}}({z:g}): series cancellation destroys accuracy"
        )
    return total


def _power(base: float, exponent: float) -> float:
    # Integer exponents stay exact; V_1 is bitwise zero.
    return float(base) ** exponent


def kernel_v(alpha: float, z: int) -> float:
    """Memory kernel ``(z+1)**(alpha-1) - z**(alpha-1)`` for integer ``z >= 1``."""
    if z < 1 or int(z) != z:
        raise ValueError(f"z: must be a positive integer (got {z})")
    if not alpha > 0:
        raise ValueError(f"alpha: must be > 0 (got {alpha})")
    e = float(alpha) - 1.0
    return _power(z + 1, e) - _power(z, e)


@dataclass(frozen=True)
class KernelTable:
    """``values[z - 1] == kernel_v(alpha, z)`` for ``z = 1..n_max``."""

    alpha: float
    values: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.values)

    def __getitem__(self, z: int) -> float:
        if z < 1:
            raise IndexError(f"kernel index starts at 1 (got {z})")
        return float(self.values[z - 1])


def kernel_table(alpha: float, n_max: int) -> KernelTable:
    if n_max < 1:
        raise ValueError(f"n_max: must be >= 1 (got {n_max})")
    e = float(alpha) - 1.0
    powers = [_power(z, e) for z in range(1, n_max + 2)]
    values = np.array([powers[i + 1] - powers[i] for i in range(n_max)], dtype=float)
    values.setflags(write=False)
    return KernelTable(float(alpha), values)


def power_table(exponent: float, n_max: int) -> np.ndarray:
    """``out[j] = j**exponent`` for ``j = 1..n_max``; ``out[0]`` is unused (0)."""
    out = np.zeros(n_max + 1)
    out[1:] = [_power(j, exponent) for j in range(1, n_max + 1)]
    return out
