"""Acceptance checks: reduction identities, oracles and dynamical landmarks.

Each ``check_*`` function returns a :class:`Criterion` made of one or more
:class:`Check` rows. The CLI ``verify`` subcommand and the test suite both
call :func:`run_all`, so they can never drift apart.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import maps
from .analysis import ScanConfig, bifurcation_scan, chaos_onset, divergence_exponent, period_onset
from .analytic import NaturalGrowthProblem, natural_growth, natural_growth_solution
from .econ import (
    ConstantC,
    ConstantG,
    GrowthParams,
    LinearPrice,
    MittagLefflerC,
    Mixed,
    PowerC,
    PowerG,
    normalize_memory,
    normalize_standard,
    r_transform,
)
from .maps import BurstGrowth, GeneralizedGrowth, StandardLogistic, step_standard_logistic
from .special import MlParams, gamma_fn, kernel_table, mittag_leffler

__all__ = ["Check", "Criterion", "CRITERIA", "run_all", "format_table"]


@dataclass(frozen=True)
class Check:
    name: str
    max_err: float
    tol: float
    passed: bool

    @classmethod
    def below(cls, name: str, err: float, tol: float) -> "Check":
        return cls(name, float(err), float(tol), bool(err < tol))

    @classmethod
    def within(cls, name: str, value: float, target: float, tol: float) -> "Check":
        err = abs(value - target) if value is not None else math.inf
        return cls(name, float(err), float(tol), bool(err <= tol))


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_err(self) -> float:
        return max(c.max_err for c in self.checks)


def _rel_dev(a, b) -> float:
    """max_i |a_i - b_i| / max(|a_i|, |b_i|); identical entries count as zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return math.inf
    diff = np.abs(a - b)
    scale = np.maximum(np.abs(a), np.abs(b))
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(diff == 0, 0.0, diff / scale)
    return float(np.max(rel)) if rel.size else 0.0


def _same_run(t1, t2) -> bool:
    return len(t1) == len(t2) and t1.escaped_at == t2.escaped_at


def _timed(number: int, title: str, body: Callable[[], list[Check]], budget: float | None = None) -> Criterion:
    t0 = time.perf_counter()
    checks = body()
    elapsed = time.perf_counter() - t0
    if budget is not None:
        checks.append(Check.below("runtime [s]", elapsed, budget))
    return Criterion(number, title, checks, elapsed)


# --- 1 ------------------------------------------------------------------------------------


def check_direct_incremental(n_steps: int = 2000) -> Criterion:
    def body():
        worst = 0.0
        f = LinearPrice(1.0, 0.5)
        for alpha in (0.1, 0.3, 0.5, 0.7, 0.9):
            spec = BurstGrowth(GrowthParams(0.5, 1.0, 1.0, alpha), f)
            for y0 in (0.1, 0.5, 0.9):
                d = maps.simulate_direct(spec, [y0], n_steps)
                i = maps.simulate_incremental(spec, [y0], n_steps)
                worst = max(worst, _rel_dev(d.values, i.values) if _same_run(d, i) else math.inf)
        return [Check.below("direct vs incremental, 15 runs", worst, 1e-9)]

    return _timed(1, "direct-incremental equivalence", body, budget=5.0)


# --- 2 ------------------------------------------------------------------------------------


def check_logistic_collapse(n_steps: int = 10_000, z0: float = 0.3) -> Criterion:
    def body():
        checks = []
        for lam in (2.5, 3.2, 3.9):
            g = GrowthParams(0.5, 1.0, 1.0, 1.0)
            f = LinearPrice(1.0, (lam - 1.0) * g.v / (g.m * g.T))
            norm = normalize_standard(g, f)
            spec = BurstGrowth(g, f)
            worst = 0.0
            for engine in ("direct", "incremental"):
                tr = maps.simulate(spec, [z0 / norm.scale], n_steps, engine=engine)
                if tr.escaped or len(tr) != n_steps + 1:
                    worst = math.inf
                    continue
                z = norm.scale * tr.values
                # the first kick only starts the memory sum; the logistic step applies from n = 1
                step = np.array([step_standard_logistic(norm.lam, zn) for zn in z[1:-1]])
                worst = max(worst, float(np.max(np.abs(z[2:] - step))), abs(norm.lam - lam))
            checks.append(Check.below(f"lambda={lam:g} per-step", worst, 1e-12))
        return checks

    return _timed(2, "alpha=1 collapse to the logistic map", body)


# --- 3 ------------------------------------------------------------------------------------


def check_normalization(n_steps: int = 500, z0: float = 0.3) -> Criterion:
    def body():
        checks = []
        f = LinearPrice(1.0, 2.0)
        for alpha in (0.3, 0.5, 0.8):
            g = GrowthParams(0.5, 1.0, 1.0, alpha)
            norm = normalize_memory(g, f)
            raw = maps.simulate_incremental(BurstGrowth(g, f), [z0 / norm.scale], n_steps)
            z = maps.simulate_logistic_memory_normalized(norm, z0, n_steps)
            err = _rel_dev(norm.scale * raw.values, z.values) if _same_run(raw, z) else math.inf
            checks.append(Check.below(f"alpha={alpha:g} raw*scale vs normalized", err, 1e-10))
        return checks

    return _timed(3, "normalization equivalence", body)


# --- 4 ------------------------------------------------------------------------------------


def _generalized_pair(spec_a, spec_b, r0, n_steps) -> float:
    ta = maps.simulate_generalized(spec_a, [r0], n_steps)
    tb = maps.simulate_generalized(spec_b, [r0], n_steps)
    if not _same_run(ta, tb) or ta.escaped:
        return math.inf
    return _rel_dev(ta.y, tb.y)


def check_reduction_lattice(n_steps: int = 500) -> Criterion:
    def body():
        f = LinearPrice(1.0, 0.5)
        alphas = (0.3, 0.5, 0.8)
        burst = 0.0
        for alpha in alphas:
            g = GrowthParams(0.5, 1.0, 1.0, alpha)
            G = PowerG(1.0, -1.0)
            gen = GeneralizedGrowth(g, Mixed(0.0, G, f), ConstantC(G.C))
            y0 = 0.4
            tg = maps.simulate_generalized(gen, [r_transform(G, y0)], n_steps)
            td = maps.simulate_direct(BurstGrowth(g, f), [y0], n_steps)
            burst = max(burst, _rel_dev(tg.y, td.values) if _same_run(tg, td) else math.inf)

        power0 = mlf0 = 0.0
        beta = 1.5
        for G in (ConstantG(0.2), PowerG(0.2, -1.0)):
            price = Mixed(0.5, G, f)
            r0 = r_transform(G, 0.4)
            for alpha in alphas:
                g = GrowthParams(0.5, 1.0, 1.0, alpha)
                power0 = max(
                    power0,
                    _generalized_pair(
                        GeneralizedGrowth(g, price, PowerC(G.C, 0.0)),
                        GeneralizedGrowth(g, price, ConstantC(G.C)),
                        r0,
                        n_steps,
                    ),
                )
                mlf0 = max(
                    mlf0,
                    _generalized_pair(
                        GeneralizedGrowth(g, price, MittagLefflerC(G.C, beta, 0.7, 0.0)),
                        GeneralizedGrowth(g, price, PowerC(G.C / gamma_fn(beta), beta - 1.0)),
                        r0,
                        n_steps,
                    ),
                )
        return [
            Check.below("p=0,q=1,j=-1 vs burst-only direct", burst, 1e-12),
            Check.below("PowerC beta=0 vs ConstantC", power0, 1e-12),
            Check.below("MittagLefflerC gamma=0 vs PowerC", mlf0, 1e-10),
        ]

    return _timed(4, "generalized-map reduction lattice", body)


# --- 5 ------------------------------------------------------------------------------------

ORACLE_CASES = (
    ("ConstantG", ConstantG(0.2), LinearPrice(1.0, 0.5)),
    ("PowerG j=1", PowerG(1.0, 1.0), LinearPrice(2.0, 0.5)),
    ("PowerG j=-1", PowerG(0.2, -1.0), LinearPrice(1.0, 0.5)),
)


def check_kicked_flow(n_steps: int = 1000, y0: float = 0.4) -> Criterion:
    def body():
        checks = []
        g = GrowthParams(0.5, 1.0, 1.0, 1.0)
        for label, G, f in ORACLE_CASES:
            spec = GeneralizedGrowth(g, Mixed(0.5, G, f), ConstantC(G.C))
            r0 = r_transform(G, y0)
            tm = maps.simulate_generalized_incremental(spec, [r0], n_steps)
            to = maps.kicked_flow_oracle_alpha1(spec, [r0], n_steps)
            ok = _same_run(tm, to) and not tm.escaped
            err = max(_rel_dev(tm.y, to.y), _rel_dev(tm.values, to.values)) if ok else math.inf
            checks.append(Check.below(f"{label} map vs kicked flow", err, 1e-10))
        return checks

    return _timed(5, "alpha=1 kicked-flow oracle", body)


# --- 6 ------------------------------------------------------------------------------------

RECURRENCE_ALPHAS = (0.3, 0.5, 0.9, 1.4, 2.0)
RECURRENCE_BETAS = (0.4, 1.0, 1.5, 2.2, 3.0)
RECURRENCE_ZS = (-1.5, -0.5, 0.0, 1.0, 2.5)


def check_mittag_leffler() -> Criterion:
    def body():
        xs = np.linspace(-5.0, 5.0, 101)
        exp_err = max(abs(mittag_leffler(MlParams(1.0, 1.0), x) - math.exp(x)) / math.exp(x) for x in xs)
        cosh_err = max(
            abs(mittag_leffler(MlParams(2.0, 1.0), x) - math.cosh(math.sqrt(x))) / math.cosh(math.sqrt(x))
            for x in np.linspace(0.0, 9.0, 101)
        )
        rec_err = 0.0
        for a in RECURRENCE_ALPHAS:
            for b in RECURRENCE_BETAS:
                for z in RECURRENCE_ZS:
                    lhs = mittag_leffler(MlParams(a, b), z)
                    rhs = 1.0 / gamma_fn(b) + z * mittag_leffler(MlParams(a, a + b), z)
                    rec_err = max(rec_err, abs(lhs - rhs) / abs(lhs))
        return [
            Check.below("E_{1,1}(x) vs exp(x), x in [-5,5]", exp_err, 1e-10),
            Check.below("E_{2,1}(x) vs cosh(sqrt x), x in [0,9]", cosh_err, 1e-10),
            Check.below("recurrence on 5x5x5 grid", rec_err, 1e-10),
        ]

    return _timed(6, "Mittag-Leffler identities", body)


# --- 7 ------------------------------------------------------------------------------------


def check_telescoping(m_max: int = 100_000) -> Criterion:
    def body():
        checks = []
        ms = np.arange(1, m_max + 1, dtype=float)
        for alpha in (0.2, 0.5, 0.8, 1.5):
            partial = np.cumsum(kernel_table(alpha, m_max).values)
            exact = (ms + 1.0) ** (alpha - 1.0) - 1.0
            err = float(np.max(np.abs(partial - exact) / np.abs(exact)))
            checks.append(Check.below(f"alpha={alpha:g}, m <= {m_max}", err, 1e-11))
        return checks

    return _timed(7, "kernel telescoping", body)


# --- 8 ------------------------------------------------------------------------------------


def check_natural_growth() -> Criterion:
    def body():
        prob = NaturalGrowthProblem(GrowthParams(0.5, 1.0, 1.0, 1.0), 1.0, (1.5,))
        err = max(
            abs(natural_growth_solution(prob, t) - 1.5 * math.exp(prob.rate * t)) / (1.5 * math.exp(prob.rate * t))
            for t in np.linspace(0.0, 10.0, 101)
        )
        half = natural_growth(0.5, 1.0, [1.0], 1.0)
        return [
            Check.below("alpha=1 vs Y0*exp(rate*t), t in [0,10]", err, 1e-10),
            Check.within("alpha=0.5, rate=1, t=1 vs 5.00898", half, 5.00898, 1e-4),
        ]

    return _timed(8, "natural-growth solution", body)


# --- 9 ------------------------------------------------------------------------------------


def check_landmarks(grid_points: int = 801, n_transient: int = 20_000, n_sample: int = 128) -> Criterion:
    def body():
        cfg = ScanConfig("lambda", 2.9, 3.7, grid_points, n_transient, n_sample, (0.3,))
        data = bifurcation_scan(cfg, StandardLogistic(3.0))
        lyap = divergence_exponent(StandardLogistic(4.0), [0.3], 100_000)
        return [
            Check.within("period-2 onset", period_onset(data, 2), 3.00, 0.01),
            Check.within("period-4 onset", period_onset(data, 4), 3.449, 0.01),
            Check.within("chaos onset", chaos_onset(data), 3.570, 0.005),
            Check.within("divergence exponent at lambda=4", lyap, math.log(2.0), 0.02),
        ]

    return _timed(9, "logistic-map landmarks", body, budget=60.0)


# --- 10 -----------------------------------------------------------------------------------


def check_second_order(n_steps: int = 500) -> Criterion:
    def body():
        g = GrowthParams(0.1, 1.0, 1.0, 1.5)
        spec = BurstGrowth(g, LinearPrice(1.0, 0.1))
        init = [0.5, 0.01]
        first = maps.simulate_direct(spec, init, 1).states[1]
        expected = np.array([init[0] + init[1] * g.T, init[1]])
        step_err = float(np.max(np.abs(first - expected)))
        t1 = maps.simulate_direct(spec, init, n_steps)
        t2 = maps.simulate_direct(spec, init, n_steps)
        same = np.array_equal(t1.states, t2.states) and t1.escaped_at == t2.escaped_at
        finite = bool(np.all(np.isfinite(t1.states)))
        bounded = finite and (t1.escaped or (len(t1) == n_steps + 1 and np.max(np.abs(t1.states)) <= maps.ESCAPE_THRESHOLD))
        return [
            Check("n=0 step vs (Y0 + Y0'T, Y0'), exact", step_err, 0.0, step_err == 0.0),
            Check("bitwise deterministic", 0.0 if same else math.inf, 0.0, same),
            Check("bounded or flagged", 0.0 if bounded else math.inf, 0.0, bounded),
        ]

    return _timed(10, "1 < alpha < 2 map", body)


CRITERIA: tuple[Callable[[], Criterion], ...] = (
    check_direct_incremental,
    check_logistic_collapse,
    check_normalization,
    check_reduction_lattice,
    check_kicked_flow,
    check_mittag_leffler,
    check_telescoping,
    check_natural_growth,
    check_landmarks,
    check_second_order,
)


def run_all(selected=None) -> list[Criterion]:
    """Run every criterion (or the 1-based numbers in ``selected``) in order."""
    out = []
    for number, fn in enumerate(CRITERIA, 1):
        if selected is None or number in selected:
            out.append(fn())
    return out


def format_table(results: list[Criterion]) -> str:
    lines = [f"{'check':<58} {'max error':>12} {'tolerance':>10}  verdict"]
    for crit in results:
        for c in crit.checks:
            name = f"[{crit.number}] {c.name}"
            lines.append(f"{name:<58} {c.max_err:>12.3e} {c.tol:>10.1e}  {'PASS' if c.passed else 'FAIL'}")
    n_pass = sum(c.passed for c in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    return "\n".join(lines)
