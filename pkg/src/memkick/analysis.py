"""Chaos diagnostics for any map: tails, periods, bifurcation scans, divergence rates.

For maps with memory the whole history drives the next state, so a
"transient" is only ever excluded from *recording*; it is never dropped
from the history buffer.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .econ import ConstantG, LinearPrice, ParameterError, PowerG
from .maps import (
    ESCAPE_THRESHOLD,
    BurstGrowth,
    GeneralizedGrowth,
    StandardLogistic,
    Trajectory,
    _Halt,
    make_engine,
)

__all__ = [
    "MAX_PERIOD",
    "DEFAULT_PERIOD_TOL",
    "DivergenceError",
    "ScanConfig",
    "BifurcationData",
    "with_param",
    "run_trajectory",
    "detect_period",
    "bifurcation_scan",
    "period_onset",
    "chaos_onset",
    "divergence_exponent",
]

MAX_PERIOD = 64
DEFAULT_PERIOD_TOL = 1e-8


class DivergenceError(ArithmeticError):
    """The divergence exponent is undefined (a trajectory left the bounded region)."""


# --- parameter plumbing --------------------------------------------------------------

_GROWTH_KEYS = ("m", "v", "T", "alpha")


def with_param(spec, name: str, value: float):
    """Copy of ``spec`` with one named parameter replaced."""
    value = float(value)
    if isinstance(spec, StandardLogistic):
        if name not in ("lambda", "lam"):
            raise ParameterError("param", "'lambda' for the standard logistic map", name)
        return StandardLogistic(value)
    if name in _GROWTH_KEYS:
        return dataclasses.replace(spec, g=dataclasses.replace(spec.g, **{name: value}))
    if isinstance(spec, BurstGrowth):
        if name in ("a", "b") and isinstance(spec.f, LinearPrice):
            return dataclasses.replace(spec, f=dataclasses.replace(spec.f, **{name: value}))
        raise ParameterError("param", "one of m, v, T, alpha, a, b for burst maps", name)
    if isinstance(spec, GeneralizedGrowth):
        price = spec.price
        if name in ("a", "b") and isinstance(price.F, LinearPrice):
            new_price = dataclasses.replace(price, F=dataclasses.replace(price.F, **{name: value}))
        elif name == "p":
            new_price = dataclasses.replace(price, p=value, q=None)
        elif name == "P0" and isinstance(price.G, ConstantG):
            new_price = dataclasses.replace(price, G=ConstantG(value))
        elif name in ("rho", "j") and isinstance(price.G, PowerG):
            new_price = dataclasses.replace(price, G=dataclasses.replace(price.G, **{name: value}))
        elif name in ("C", "beta", "mu", "gamma") and hasattr(spec.forcing, name):
            return dataclasses.replace(spec, forcing=dataclasses.replace(spec.forcing, **{name: value}))
        else:
            raise ParameterError("param", "a parameter of this generalized map", name)
        return dataclasses.replace(spec, price=new_price)
    raise TypeError(f"unknown map spec {spec!r}")


# --- trajectories and periods ----------------------------------------------------------


def run_trajectory(spec, init, n_steps: int, n_record_tail: int, engine: str = "direct") -> Trajectory:
    """Simulate ``n_steps`` with full memory and return the last ``n_record_tail`` states."""
    if not 0 <= n_record_tail <= n_steps + 1:
        raise ParameterError("n_record_tail", f"0 <= tail <= n_steps + 1 = {n_steps + 1}", n_record_tail)
    return make_engine(spec, init, n_steps, engine).run().tail(n_record_tail)


def detect_period(samples: Sequence[float], tol: float = DEFAULT_PERIOD_TOL, max_period: int = MAX_PERIOD):
    """Smallest ``p <= max_period`` with ``|x[i+p] - x[i]| < tol`` over the window, else ``None``.

    ``tol`` is relative to ``max(1, max|x|)``. Periods longer than half the
    window are not tested.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("need at least two samples")
    if not np.all(np.isfinite(x)):
        return None
    tol_eff = tol * max(1.0, float(np.max(np.abs(x))))
    for p in range(1, min(max_period, len(x) // 2) + 1):
        if np.max(np.abs(x[p:] - x[:-p])) < tol_eff:
            return p
    return None


# --- bifurcation scans ------------------------------------------------------------------


@dataclass(frozen=True)
class ScanConfig:
    param_name: str
    lo: float
    hi: float
    grid_points: int
    n_transient: int
    n_sample: int
    init: tuple[float, ...]

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ParameterError("from", f"from < to (to={self.hi})", self.lo)
        if int(self.grid_points) != self.grid_points or self.grid_points < 2:
            raise ParameterError("grid", "integer >= 2", self.grid_points)
        if int(self.n_transient) != self.n_transient or self.n_transient < 0:
            raise ParameterError("transient", "integer >= 0", self.n_transient)
        if int(self.n_sample) != self.n_sample or self.n_sample < 1:
            raise ParameterError("sample", "integer >= 1", self.n_sample)
        object.__setattr__(self, "init", tuple(float(v) for v in np.atleast_1d(self.init)))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.grid_points))


@dataclass(frozen=True)
class BifurcationData:
    """Sampled long-run values: ``values[i, k]`` is sample ``k`` at ``params[i]``."""

    param_name: str
    params: np.ndarray
    values: np.ndarray
    escaped: np.ndarray

    def rows(self) -> Iterator[tuple[float, int, float, bool]]:
        for i, lam in enumerate(self.params):
            for k, val in enumerate(self.values[i]):
                yield float(lam), k, float(val), bool(self.escaped[i])

    def periods(self, tol: float = DEFAULT_PERIOD_TOL) -> list:
        return [None if e else detect_period(v, tol) for v, e in zip(self.values, self.escaped)]

    def to_csv(self, dest=None) -> str | None:
        """Write ``param,sample_index,value,escaped``; returns the text when ``dest`` is None."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "sample_index", "value", "escaped"])
        for lam, k, val, esc in self.rows():
            w.writerow([f"{lam:.17g}", k, f"{val:.17g}", int(esc)])
        text = buf.getvalue()
        if dest is None:
            return text
        with open(dest, "w", newline="") as fh:
            fh.write(text)
        return None


def _scan_point(task) -> tuple[np.ndarray, bool]:
    spec, init, n_total, n_sample, engine = task
    tr = make_engine(spec, init, n_total, engine).run()
    if tr.escaped or len(tr) < n_total + 1:
        return np.full(n_sample, np.nan), True
    return np.array(tr.y[-n_sample:], dtype=float), False


def _logistic_batch(lams: np.ndarray, z0: float, n_total: int, n_sample: int):
    # Same float operations, in the same order, as step_standard_logistic.
    z = np.full(len(lams), float(z0))
    escaped = np.zeros(len(lams), dtype=bool)
    out = np.empty((len(lams), n_sample))
    first = n_total - n_sample + 1
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_total + 1):
            z = lams * z * (1 - z)
            bad = ~(np.abs(z) <= ESCAPE_THRESHOLD)
            if bad.any():
                escaped |= bad
                z = np.where(escaped, 0.0, z)
            if n >= first:
                out[:, n - first] = z
    out[escaped] = np.nan
    return out, escaped


def bifurcation_scan(cfg: ScanConfig, spec, workers: int = 1, engine: str = "direct") -> BifurcationData:
    """Run every grid point for ``n_transient + n_sample`` steps and keep the last ``n_sample``.

    Grid points are independent; with ``workers > 1`` they run in a process
    pool and are merged back in grid order, so the output does not depend on
    the worker count.
    """
    grid = cfg.grid
    n_total = cfg.n_transient + cfg.n_sample
    specs = [with_param(spec, cfg.param_name, lam) for lam in grid]
    if isinstance(spec, StandardLogistic) and len(cfg.init) == 1:
        values, escaped = _logistic_batch(grid, cfg.init[0], n_total, cfg.n_sample)
    else:
        tasks = [(s, cfg.init, n_total, cfg.n_sample, engine) for s in specs]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_scan_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
        else:
            results = [_scan_point(t) for t in tasks]
        values = np.array([r[0] for r in results]).reshape(len(grid), cfg.n_sample)
        escaped = np.array([r[1] for r in results], dtype=bool)
    return BifurcationData(cfg.param_name, grid, values, escaped)


def period_onset(data: BifurcationData, period: int, tol: float = DEFAULT_PERIOD_TOL):
    """First grid value whose sampled orbit has exactly ``period``."""
    for lam, p in zip(data.params, data.periods(tol)):
        if p == period:
            return float(lam)
    return None


def chaos_onset(data: BifurcationData, tol: float = DEFAULT_PERIOD_TOL, run: int = 3):
    """First grid value starting ``run`` consecutive bounded aperiodic points.

    Requiring a run keeps isolated slow-converging points next to a
    period-doubling from being mistaken for chaos.
    """
    aperiodic = [p is None and not e for p, e in zip(data.periods(tol), data.escaped)]
    for i in range(len(aperiodic) - run + 1):
        if all(aperiodic[i : i + run]):
            return float(data.params[i])
    return None


# --- divergence exponent ------------------------------------------------------------------


def divergence_exponent(
    spec,
    init,
    n_steps: int,
    delta0: float = 1e-8,
    renorm_every: int = 1,
    n_transient: int = 0,
    engine: str = "direct",
) -> float:
    """Mean logarithmic separation rate of two nearby full-history trajectories.

    The copy starts ``delta0`` away in the first state component. Every
    ``renorm_every`` steps the separation of the current states is measured
    and the whole history difference is scaled back to ``delta0``, which keeps
    the pair in the linear regime without rewriting either equation. For maps
    with memory this is an empirical rate, not a tangent-space exponent.
    """
    if not delta0 > 0:
        raise ParameterError("delta0", "delta0 > 0", delta0)
    if int(renorm_every) != renorm_every or renorm_every < 1:
        raise ParameterError("renorm_every", "integer >= 1", renorm_every)
    if n_steps < renorm_every:
        raise ParameterError("n_steps", f"n_steps >= renorm_every ({renorm_every})", n_steps)
    init = np.asarray(init, dtype=float).reshape(-1)
    if isinstance(spec, StandardLogistic):
        return _logistic_divergence(spec.lam, float(init[0]), n_steps, delta0, renorm_every, n_transient)
    return _engine_divergence(spec, init, n_steps, delta0, renorm_every, n_transient, engine)


def _engine_divergence(spec, init, n_steps, delta0, renorm_every, n_transient, engine) -> float:
    shifted = init.copy()
    shifted[0] += delta0
    total = n_transient + n_steps
    base = make_engine(spec, init, total, engine)
    pert = make_engine(spec, shifted, total, engine)

    log_sum = 0.0
    counted = 0
    for step in range(1, total + 1):
        halted = []
        for eng in (base, pert):
            try:
                eng.advance()
            except _Halt as h:
                halted.append(h.reason)
        if halted:
            which = "both trajectories" if len(halted) == 2 else "one trajectory"
            raise DivergenceError(f"{which} left the bounded region at step {step} ({halted[0]})")
        if step % renorm_every:
            continue
        n = base.n
        diff = pert.x[n] - base.x[n]
        d = float(np.sqrt(np.dot(diff, diff)))
        if step > n_transient:
            log_sum += math.log(max(d, 1e-300) / delta0)
            counted += renorm_every
        if d == 0.0:
            pert.x[n, 0] = base.x[n, 0] + delta0
        else:
            factor = delta0 / d
            pert.x[: n + 1] = base.x[: n + 1] + factor * (pert.x[: n + 1] - base.x[: n + 1])
        pert.recompute()
    if counted == 0:
        raise ParameterError("n_steps", "at least one renormalization after the transient", n_steps)
    return log_sum / counted


def _logistic_divergence(lam, z0, n_steps, delta0, renorm_every, n_transient) -> float:
    # Scalar version of the loop above; only the current state matters.
    z, w = z0, z0 + delta0
    log_sum = 0.0
    counted = 0
    for step in range(1, n_transient + n_steps + 1):
        z = lam * z * (1 - z)
        w = lam * w * (1 - w)
        if not (abs(z) <= ESCAPE_THRESHOLD and abs(w) <= ESCAPE_THRESHOLD):
            which = "both trajectories" if not (abs(z) <= ESCAPE_THRESHOLD or abs(w) <= ESCAPE_THRESHOLD) else "one trajectory"
            raise DivergenceError(f"{which} left the bounded region at step {step}")
        if step % renorm_every:
            continue
        d = abs(w - z)
        if step > n_transient:
            log_sum += math.log(max(d, 1e-300) / delta0)
            counted += renorm_every
        w = z + (delta0 if d == 0.0 else (w - z) * (delta0 / d))
    if counted == 0:
        raise ParameterError("n_steps", "at least one renormalization after the transient", n_steps)
    return log_sum / counted
