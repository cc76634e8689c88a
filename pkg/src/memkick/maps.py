"""Discrete maps with power-law memory.

Every engine keeps the full history; nothing is truncated. States are the
pre-kick samples ``X_k^(s) = X^(s)(kT - 0)`` for ``s = 0..N-1``, where ``X``
is ``Y`` for burst-only growth and ``R(Y)`` for the generalized model.

Step ``n = 0`` follows the Volterra (direct) form by default, which has an
empty memory sum and therefore gives ``Y_1 = Y_0`` for burst-only maps. The
incremental (differenced) forms only hold for ``n >= 1``; passing
``seed_step="incremental"`` applies them at ``n = 0`` as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .econ import (
    ConstantC,
    ForcingSpec,
    GrowthParams,
    LinearPrice,
    LogisticNormalization,
    MittagLefflerC,
    Mixed,
    OutputFunction,
    ParameterError,
    PowerC,
    burst_ratio,
    r_inverse,
)
from .special import MlParams, gamma_fn, kernel_table, mittag_leffler, power_table

__all__ = [
    "ESCAPE_THRESHOLD",
    "BurstGrowth",
    "GeneralizedGrowth",
    "StandardLogistic",
    "MapSpec",
    "Trajectory",
    "integrated_forcing",
    "simulate",
    "simulate_direct",
    "simulate_incremental",
    "step_standard_logistic",
    "simulate_standard_logistic",
    "simulate_logistic_memory_normalized",
    "simulate_generalized",
    "simulate_generalized_incremental",
    "kicked_flow_oracle_alpha1",
    "make_engine",
]

ESCAPE_THRESHOLD = 1e10
SEED_STEPS = ("volterra", "incremental")


@dataclass(frozen=True)
class BurstGrowth:
    """Growth driven only by periodic price bursts F(Y)."""

    g: GrowthParams
    f: OutputFunction


@dataclass(frozen=True)
class GeneralizedGrowth:
    """Continuous price p*G(Y) plus bursts q*F(Y); iterated in R-space."""

    g: GrowthParams
    price: Mixed
    forcing: ForcingSpec

    def __post_init__(self):
        if not isinstance(self.price, Mixed):
            raise TypeError("GeneralizedGrowth needs a Mixed price specification")


@dataclass(frozen=True)
class StandardLogistic:
    lam: float

    def __post_init__(self):
        if not (isinstance(self.lam, (int, float)) and math.isfinite(self.lam)):
            raise ParameterError("lambda", "lambda finite", self.lam)

    @property
    def bounded(self) -> bool:
        """Orbits from [0, 1] stay in [0, 1] only for 0 < lambda <= 4."""
        return 0 < self.lam <= 4


MapSpec = Union[BurstGrowth, GeneralizedGrowth, StandardLogistic]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded states, one row per step ``n = 0..len-1``.

    ``escaped_at`` is the first step that could not be recorded normally:
    for ``reason in {"escape", "nonfinite"}`` that state is dropped, for
    ``reason == "domain"`` the R-state is kept but its Y-view is NaN.
    """

    states: np.ndarray
    spec: object
    y: np.ndarray
    escaped_at: int | None = None
    reason: str | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def values(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def escaped(self) -> bool:
        return self.escaped_at is not None

    def __len__(self) -> int:
        return len(self.states)

    def __eq__(self, other) -> bool:
        """Bitwise equality of the recorded data (NaN-safe), plus the halt record."""
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.states.shape == other.states.shape
            and self.states.tobytes() == other.states.tobytes()
            and self.y.tobytes() == other.y.tobytes()
            and (self.escaped_at, self.reason) == (other.escaped_at, other.reason)
        )

    __hash__ = None

    def tail(self, k: int) -> "Trajectory":
        return Trajectory(
            self.states[-k:] if k else self.states[:0],
            self.spec,
            self.y[-k:] if k else self.y[:0],
            self.escaped_at,
            self.reason,
            dict(self.meta, offset=len(self.states) - k),
        )


class _Halt(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _poly_part(x0: np.ndarray, T: float, n_plus_1: int, s: int, N: int) -> float:
    """sum_{k=0}^{N-s-1} T^k/k! * x0[k+s] * (n+1)^k."""
    total = 0.0
    for k in range(N - s):
        total += T**k / math.factorial(k) * x0[k + s] * n_plus_1**k
    return total


def _recompute_burst(engine) -> None:
    f = engine.spec.f
    y = engine.x[: engine.n + 1, 0]
    engine.y[: engine.n + 1] = y
    if isinstance(f, LinearPrice):
        engine.h[: engine.n + 1] = (f.a * y - f.b) * y
    else:
        engine.h[: engine.n + 1] = [f(v) * v for v in y]


def _memory_sum(weights: np.ndarray, terms: np.ndarray) -> float:
    # The Volterra form re-adds the whole history every step. A BLAS dot product
    # accumulates O(n eps) error that depends on the BLAS build; numpy's pairwise
    # sum keeps it at O(eps log n) and is the same everywhere.
    return float(np.sum(weights * terms))


def _volterra_coefficient(g: GrowthParams, s: int) -> float:
    return g.memory_coefficient(s)


def integrated_forcing(c: ForcingSpec, order: float, t: float) -> float:
    """Riemann-Liouville integral of the forcing C(t), of the given order, at ``t``."""
    if t == 0.0:
        return 0.0
    if isinstance(c, ConstantC):
        return c.C * t**order / gamma_fn(order + 1.0)
    if isinstance(c, PowerC):
        return c.C * gamma_fn(c.beta + 1.0) / gamma_fn(order + c.beta + 1.0) * t ** (order + c.beta)
    if isinstance(c, MittagLefflerC):
        ml = mittag_leffler(MlParams(c.mu, order + c.beta), c.gamma * t**c.mu)
        return c.C * t ** (order + c.beta - 1.0) * ml
    raise TypeError(f"unknown forcing {c!r}")


# --- engines ------------------------------------------------------------------------


class _Engine:
    """Full-history stepper. Subclasses fill ``_next`` and ``_cache``."""

    def __init__(self, spec, init: Sequence[float], n_steps: int, width: int):
        if int(n_steps) != n_steps or n_steps < 0:
            raise ParameterError("n_steps", "integer >= 0", n_steps)
        init = np.asarray(init, dtype=float).reshape(-1)
        if init.shape != (width,):
            raise ParameterError("init", f"length {width} (one value per derivative order)", list(init))
        if not np.all(np.isfinite(init)):
            raise ParameterError("init", "finite values", list(init))
        self.spec = spec
        self.N = width
        self.cap = int(n_steps) + 1
        self.x = np.zeros((self.cap, width))
        self.x[0] = init
        self.y = np.full(self.cap, np.nan)
        self.n = 0
        self.halted: str | None = None

    # subclass hooks
    def _next(self) -> np.ndarray:
        raise NotImplementedError

    def _cache(self, k: int) -> None:
        self.y[k] = self.x[k, 0]

    def start(self) -> "_Engine":
        self._cache(0)
        return self

    def advance(self) -> None:
        if self.halted:
            raise _Halt(self.halted)
        if self.n + 1 >= self.cap:
            raise IndexError("engine capacity exhausted")
        new = self._next()
        if not np.all(np.isfinite(new)):
            self.halted = "nonfinite"
            raise _Halt("nonfinite")
        if np.max(np.abs(new)) > ESCAPE_THRESHOLD:
            self.halted = "escape"
            raise _Halt("escape")
        self.n += 1
        self.x[self.n] = new
        try:
            self._cache(self.n)
        except ParameterError:
            self.halted = "domain"
            self.y[self.n] = np.nan
            raise _Halt("domain") from None
        except (OverflowError, ZeroDivisionError):
            self.halted = "escape"
            self.n -= 1
            raise _Halt("escape") from None
        if not abs(self.y[self.n]) <= ESCAPE_THRESHOLD:
            self.halted = "escape"
            self.n -= 1
            raise _Halt("escape")

    def recompute(self) -> None:
        """Rebuild derived caches after the history was edited in place."""
        for k in range(self.n + 1):
            self._cache(k)

    def run(self, n_steps: int | None = None) -> Trajectory:
        target = self.cap - 1 if n_steps is None else n_steps
        escaped_at = reason = None
        while self.n < target:
            try:
                self.advance()
            except _Halt as h:
                reason = h.reason
                escaped_at = self.n if reason == "domain" else self.n + 1
                break
        return self.trajectory(escaped_at, reason)

    def trajectory(self, escaped_at=None, reason=None) -> Trajectory:
        k = self.n + 1
        states = self.x[:k].copy()
        y = self.y[:k].copy()
        states.setflags(write=False)
        y.setflags(write=False)
        return Trajectory(states, self.spec, y, escaped_at, reason)


class _BurstDirect(_Engine):
    """Volterra form: X_{n+1}^(s) = poly_s(n+1) - c_s sum_k (n+1-k)^(alpha-1-s) F(Y_k) Y_k."""

    def __init__(self, spec: BurstGrowth, init, n_steps):
        super().__init__(spec, init, n_steps, spec.g.n)
        g = spec.g
        a = g.alpha.value
        self.coef = [_volterra_coefficient(g, s) for s in range(self.N)]
        self.pw = [power_table(a - 1.0 - s, self.cap) for s in range(self.N)]
        self.h = np.zeros(self.cap)

    def _cache(self, k):
        y = self.x[k, 0]
        self.y[k] = y
        self.h[k] = self.spec.f(y) * y

    def recompute(self):
        _recompute_burst(self)

    def _next(self):
        n = self.n
        T = self.spec.g.T
        out = np.empty(self.N)
        for s in range(self.N):
            mem = _memory_sum(self.pw[s][n:0:-1], self.h[1 : n + 1]) if n else 0.0
            out[s] = _poly_part(self.x[0], T, n + 1, s, self.N) - self.coef[s] * mem
        return out


class _BurstIncremental(_Engine):
    """Differenced form for 0 < alpha <= 1, valid for n >= 1."""

    def __init__(self, spec: BurstGrowth, init, n_steps, seed_step="volterra"):
        if spec.g.n != 1:
            raise ParameterError("alpha", "0 < alpha <= 1 for the incremental engine", spec.g.alpha.value)
        _check_seed(seed_step)
        super().__init__(spec, init, n_steps, 1)
        self.seed_step = seed_step
        self.coef = spec.g.memory_coefficient(0)
        self.kernel = kernel_table(spec.g.alpha.value, max(self.cap, 1)).values
        self.h = np.zeros(self.cap)

    def _cache(self, k):
        y = self.x[k, 0]
        self.y[k] = y
        self.h[k] = self.spec.f(y) * y

    def recompute(self):
        _recompute_burst(self)

    def _next(self):
        n = self.n
        yn = self.x[n, 0]
        if n == 0:
            if self.seed_step == "volterra":
                return np.array([yn])
            return np.array([yn - self.coef * self.h[0]])
        mem = float(np.dot(self.kernel[: n - 1][::-1], self.h[1:n])) if n > 1 else 0.0
        return np.array([yn - self.coef * self.h[n] - self.coef * mem])


class _StandardLogistic(_Engine):
    def __init__(self, spec: StandardLogistic, init, n_steps):
        super().__init__(spec, init, n_steps, 1)

    def _next(self):
        return np.array([step_standard_logistic(self.spec.lam, self.x[self.n, 0])])


class _LogisticMemory(_Engine):
    """Z_{n+1} = lam Z_n (1 - Z_n) + mu sum_{k=1}^{n-1} V(n-k) Z_k (1 - eta Z_k).

    The memory sum enters with a plus sign: that is what the substitution
    Z = scale * Y produces from the differenced linear-price map.
    """

    def __init__(self, norm: LogisticNormalization, init, n_steps, seed_step="volterra"):
        _check_seed(seed_step)
        if not 0 < norm.alpha <= 1:
            raise ParameterError("alpha", "0 < alpha <= 1 for the logistic memory map", norm.alpha)
        super().__init__(norm, init, n_steps, 1)
        self.seed_step = seed_step
        self.kernel = kernel_table(norm.alpha, max(self.cap, 1)).values
        self.w = np.zeros(self.cap)

    def _cache(self, k):
        z = self.x[k, 0]
        self.y[k] = z
        eta = self.spec.eta
        self.w[k] = z * (1.0 - eta * z) if eta is not None else 0.0

    def recompute(self):
        z = self.x[: self.n + 1, 0]
        self.y[: self.n + 1] = z
        eta = self.spec.eta
        self.w[: self.n + 1] = z * (1.0 - eta * z) if eta is not None else 0.0

    def _next(self):
        n = self.n
        lam = self.spec.lam
        zn = self.x[n, 0]
        if n == 0 and self.seed_step == "volterra":
            return np.array([zn])
        mem = float(np.dot(self.kernel[: n - 1][::-1], self.w[1:n])) if n > 1 else 0.0
        return np.array([lam * zn * (1.0 - zn) + self.spec.mu * mem])


class _GeneralizedBase(_Engine):
    def __init__(self, spec: GeneralizedGrowth, init, n_steps):
        super().__init__(spec, init, n_steps, spec.g.n)
        self.hg = np.zeros(self.cap)
        try:
            self._cache(0)
        except ParameterError as exc:
            raise ParameterError("init", "R_0 inside the range of the R transform", exc.value) from None

    def _cache(self, k):
        price = self.spec.price
        y = r_inverse(price.G, self.x[k, 0])
        self.y[k] = y
        self.hg[k] = burst_ratio(price.G, price.F, y)

    def _forcing(self, step: int, s: int) -> float:
        g = self.spec.g
        return (
            self.spec.price.p
            * g.rate
            * integrated_forcing(self.spec.forcing, g.alpha.value - s, step * g.T)
        )


class _GeneralizedDirect(_GeneralizedBase):
    def __init__(self, spec: GeneralizedGrowth, init, n_steps):
        a = spec.g.alpha.value
        self.coef = [spec.g.memory_coefficient(s) for s in range(spec.g.n)]
        self.pw = [power_table(a - 1.0 - s, int(n_steps) + 1) for s in range(spec.g.n)]
        super().__init__(spec, init, n_steps)

    def _next(self):
        n = self.n
        q = self.spec.price.q
        T = self.spec.g.T
        out = np.empty(self.N)
        for s in range(self.N):
            mem = _memory_sum(self.pw[s][n:0:-1], self.hg[1 : n + 1]) if n else 0.0
            out[s] = (
                _poly_part(self.x[0], T, n + 1, s, self.N)
                + self._forcing(n + 1, s)
                - q * self.coef[s] * mem
            )
        return out


class _GeneralizedIncremental(_GeneralizedBase):
    """Differenced generalized map for constant forcing, valid for n >= 1."""

    def __init__(self, spec: GeneralizedGrowth, init, n_steps, seed_step="volterra"):
        if not isinstance(spec.forcing, ConstantC):
            raise TypeError("the incremental generalized map needs ConstantC forcing")
        _check_seed(seed_step)
        g = spec.g
        a = g.alpha.value
        N = g.n
        cap = int(n_steps) + 1
        self.seed_step = seed_step
        self.coef = [g.memory_coefficient(s) for s in range(N)]
        self.kernel = [kernel_table(a - s, cap).values for s in range(N)]
        self.force_kernel = [kernel_table(a + 1.0 - s, cap).values for s in range(N)]
        self.force_coef = [
            spec.price.p * spec.forcing.C * g.m * g.T ** (a - s) / (g.v * gamma_fn(a + 1.0 - s))
            for s in range(N)
        ]
        super().__init__(spec, init, n_steps)

    def _next(self):
        n = self.n
        q = self.spec.price.q
        T = self.spec.g.T
        x0 = self.x[0]
        out = np.empty(self.N)
        if n == 0 and self.seed_step == "volterra":
            for s in range(self.N):
                out[s] = _poly_part(x0, T, 1, s, self.N) + self._forcing(1, s)
            return out
        for s in range(self.N):
            # (n+1)^k - n^k, with 0^0 = 1 so the k = 0 term always vanishes
            poly = sum(
                T**k / math.factorial(k) * x0[k + s] * ((n + 1) ** k - n**k)
                for k in range(1, self.N - s)
            )
            force = self.force_kernel[s][n - 1] if n else 1.0
            mem = float(np.dot(self.kernel[s][: n - 1][::-1], self.hg[1:n])) if n > 1 else 0.0
            out[s] = (
                self.x[n, s]
                + poly
                + self.force_coef[s] * force
                - q * self.coef[s] * self.hg[n]
                - q * self.coef[s] * mem
            )
        return out


def _check_seed(seed_step: str) -> None:
    if seed_step not in SEED_STEPS:
        raise ParameterError("seed_step", f"one of {SEED_STEPS}", seed_step)


# --- public API -----------------------------------------------------------------------


def step_standard_logistic(lam: float, z: float) -> float:
    return lam * z * (1 - z)


def make_engine(spec, init, n_steps: int, engine: str = "direct", seed_step: str = "volterra") -> _Engine:
    """Build a stepper for ``spec``; ``engine`` is ``"direct"`` or ``"incremental"``."""
    if engine not in ("direct", "incremental"):
        raise ParameterError("engine", "one of ('direct', 'incremental')", engine)
    if isinstance(spec, StandardLogistic):
        return _StandardLogistic(spec, init, n_steps).start()
    if isinstance(spec, LogisticNormalization):
        return _LogisticMemory(spec, init, n_steps, seed_step).start()
    if isinstance(spec, BurstGrowth):
        if engine == "incremental":
            return _BurstIncremental(spec, init, n_steps, seed_step).start()
        return _BurstDirect(spec, init, n_steps).start()
    if isinstance(spec, GeneralizedGrowth):
        if engine == "incremental":
            return _GeneralizedIncremental(spec, init, n_steps, seed_step)
        return _GeneralizedDirect(spec, init, n_steps)
    raise TypeError(f"unknown map spec {spec!r}")


def simulate(spec, init, n_steps: int, engine: str = "direct", seed_step: str = "volterra") -> Trajectory:
    return make_engine(spec, init, n_steps, engine, seed_step).run()


def simulate_direct(spec: BurstGrowth, init, n_steps: int) -> Trajectory:
    """Iterate the burst-only memory map in its Volterra form (any alpha > 0)."""
    if not isinstance(spec, BurstGrowth):
        raise TypeError("simulate_direct expects a BurstGrowth spec")
    return _BurstDirect(spec, init, n_steps).start().run()


def simulate_incremental(spec: BurstGrowth, init, n_steps: int, seed_step: str = "volterra") -> Trajectory:
    """Iterate the differenced burst-only map (0 < alpha <= 1) using the kernel table."""
    if not isinstance(spec, BurstGrowth):
        raise TypeError("simulate_incremental expects a BurstGrowth spec")
    return _BurstIncremental(spec, init, n_steps, seed_step).start().run()


def simulate_standard_logistic(lam: float, z0: float, n_steps: int) -> Trajectory:
    return _StandardLogistic(StandardLogistic(lam), [z0], n_steps).start().run()


def simulate_logistic_memory_normalized(
    norm: LogisticNormalization, z0: float, n_steps: int, seed_step: str = "volterra"
) -> Trajectory:
    return _LogisticMemory(norm, [z0], n_steps, seed_step).start().run()


def simulate_generalized(spec: GeneralizedGrowth, init, n_steps: int) -> Trajectory:
    """Direct generalized map in R-space; ``Trajectory.y`` is the Y-view."""
    return _GeneralizedDirect(spec, init, n_steps).run()


def simulate_generalized_incremental(
    spec: GeneralizedGrowth, init, n_steps: int, seed_step: str = "volterra"
) -> Trajectory:
    return _GeneralizedIncremental(spec, init, n_steps, seed_step).run()


def kicked_flow_oracle_alpha1(spec: GeneralizedGrowth, init, n_steps: int) -> Trajectory:
    """Integrate the memoryless kicked R-flow exactly and sample it at t = kT - 0.

    Between kicks R grows with slope p*(m/v)*C. At t = kT (k >= 1) it jumps by
    -q*(m/v)*T*K*F(Y)/G(Y), evaluated at the left limit Y(kT - 0), with K the
    constant that normalizes R. No map formula is used.
    """
    g = spec.g
    if g.alpha.value != 1.0:
        raise ParameterError("alpha", "alpha == 1 for the kicked-flow oracle", g.alpha.value)
    if not isinstance(spec.forcing, ConstantC):
        raise TypeError("the kicked-flow oracle needs ConstantC forcing")
    price = spec.price
    G, F, K = price.G, price.F, price.G.C
    drift = price.p * g.rate * spec.forcing.C * g.T
    kick = price.q * g.rate * g.T

    r = float(np.asarray(init, dtype=float).reshape(-1)[0])
    states = [r]
    ys = [r_inverse(G, r)]
    escaped_at = reason = None
    for k in range(1, n_steps + 1):
        if k > 1:
            y_left = ys[-1]
            r = r - kick * K * F(y_left) / G(y_left)
        r = r + drift
        try:
            y = r_inverse(G, r)
        except ParameterError:
            states.append(r)
            ys.append(np.nan)
            escaped_at, reason = k, "domain"
            break
        if not (math.isfinite(r) and math.isfinite(y)) or max(abs(r), abs(y)) > ESCAPE_THRESHOLD:
            escaped_at, reason = k, "escape"
            break
        states.append(r)
        ys.append(y)
    return Trajectory(np.array(states).reshape(-1, 1), spec, np.array(ys), escaped_at, reason)
