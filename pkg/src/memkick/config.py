"""Flat ``key = value`` run configuration and spec construction.

Sources are merged in increasing precedence: built-in defaults, the file
named by ``MEMKICK_CONFIG``, the file given with ``--config``, then
command-line flags. Keys are case-sensitive; ``-`` and ``_`` are
interchangeable. Any key outside :data:`KEYS` is an error.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Mapping

from .econ import (
    ConstantC,
    ConstantG,
    GrowthParams,
    LinearPrice,
    MittagLefflerC,
    Mixed,
    ParameterError,
    PowerC,
    PowerG,
    r_slope,
    r_transform,
)
from .maps import SEED_STEPS, BurstGrowth, GeneralizedGrowth, StandardLogistic

__all__ = ["KEYS", "DEFAULTS", "ENV_VAR", "RunConfig", "parse_config_text", "load_config_file", "resolve"]

ENV_VAR = "MEMKICK_CONFIG"

# key -> (kind, default, description). ``None`` defaults are derived.
KEYS: dict[str, tuple[str, object, str]] = {
    "map": (
        "choice:burst,generalized,logistic",
        "burst",
        "map family to iterate; logistic when only lambda or z0 is set",
    ),
    "m": ("float", 0.5, "net-investment norm, 0 < m < 1"),
    "v": ("float", 1.0, "accelerator coefficient, v > 0"),
    "T": ("float", 1.0, "kick period, T > 0"),
    "alpha": ("float", 0.5, "memory order, alpha > 0"),
    "a": ("float", 1.0, "slope of F(Y) = a*Y - b"),
    "b": ("float", 0.5, "offset of F(Y) = a*Y - b"),
    "p": ("float", 0.5, "weight of the continuous price, 0 <= p <= 1"),
    "q": ("float", None, "burst weight; defaults to 1 - p"),
    "g_case": ("choice:constant,linear,power", "constant", "continuous price G(Y)"),
    "P0": ("float", 1.0, "constant price level for g_case=constant"),
    "rho": ("float", 1.0, "coefficient of G(Y) = rho*Y**j"),
    "j": ("float", 1.0, "exponent of G(Y) = rho*Y**j (forced to 1 for g_case=linear)"),
    "forcing": ("choice:constant,power,mittag-leffler", "constant", "forcing C(t)"),
    "C": ("float", None, "forcing coefficient; defaults to P0 or rho"),
    "beta": ("float", 0.0, "forcing exponent / Mittag-Leffler shift"),
    "mu": ("float", 1.0, "Mittag-Leffler order of the forcing"),
    "gamma": ("float", 0.0, "Mittag-Leffler rate of the forcing"),
    "y0": ("float", 0.5, "initial output Y(0)"),
    "y0_d1": ("float", 0.0, "initial derivative Y'(0), used when 1 < alpha <= 2"),
    "n_steps": ("int", 100, "number of kicks to iterate"),
    "lambda": ("float", 3.2, "parameter of the standard logistic map"),
    "z0": ("float", 0.3, "initial value of the standard logistic map"),
    "engine": ("choice:direct,incremental", "direct", "evaluation form of the map"),
    "seed_step": ("choice:" + ",".join(SEED_STEPS), "volterra", "rule used for the first step"),
}

DEFAULTS = {k: spec[1] for k, spec in KEYS.items()}


def _canonical(key: str) -> str:
    key = key.strip().replace("-", "_")
    if key not in KEYS:
        raise ParameterError(key, "a known configuration key", None)
    return key


def _coerce(key: str, raw):
    kind = KEYS[key][0]
    if raw is None:
        return None
    if kind == "float":
        try:
            val = float(raw)
        except (TypeError, ValueError):
            raise ParameterError(key, "a real number", raw) from None
        if not math.isfinite(val):
            raise ParameterError(key, "a finite real number", raw)
        return val
    if kind == "int":
        try:
            val = float(raw)
        except (TypeError, ValueError):
            raise ParameterError(key, "a non-negative integer", raw) from None
        if not val.is_integer() or val < 0:
            raise ParameterError(key, "a non-negative integer", raw)
        return int(val)
    choices = kind.split(":", 1)[1].split(",")
    if str(raw) not in choices:
        raise ParameterError(key, "one of " + ", ".join(choices), raw)
    return str(raw)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{source}:{lineno}", "'key = value' syntax", line)
        key, value = line.split("=", 1)
        out[_canonical(key)] = value.strip()
    return out


def load_config_file(path: str) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), path)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameter map plus where each value came from."""

    values: dict = field(default_factory=dict)
    origin: dict = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]

    def explicit(self, key: str) -> bool:
        return self.origin.get(key, "default") != "default"

    def with_map(self, kind: str) -> "RunConfig":
        values = dict(self.values, map=_coerce("map", kind))
        return RunConfig(values, dict(self.origin, map="implied"))

    # --- spec construction -------------------------------------------------------

    def growth(self) -> GrowthParams:
        v = self.values
        return GrowthParams(v["m"], v["v"], v["T"], v["alpha"])

    def output_function(self) -> LinearPrice:
        return LinearPrice(self.values["a"], self.values["b"])

    def g_case(self):
        v = self.values
        if v["g_case"] == "constant":
            return ConstantG(v["P0"])
        if v["g_case"] == "linear":
            return PowerG(v["rho"], 1.0)
        return PowerG(v["rho"], v["j"])

    def forcing(self, G):
        v = self.values
        c = v["C"] if v["C"] is not None else G.C
        if v["forcing"] == "constant":
            return ConstantC(c)
        if v["forcing"] == "power":
            return PowerC(c, v["beta"])
        return MittagLefflerC(c, v["beta"], v["mu"], v["gamma"])

    def price(self) -> Mixed:
        v = self.values
        return Mixed(v["p"], self.g_case(), self.output_function(), v["q"])

    def spec(self):
        kind = self.values["map"]
        if kind == "logistic":
            return StandardLogistic(self.values["lambda"])
        if kind == "burst":
            return BurstGrowth(self.growth(), self.output_function())
        price = self.price()
        return GeneralizedGrowth(self.growth(), price, self.forcing(price.G))

    def initial_state(self, spec=None) -> list[float]:
        """Initial state in the map's own variable (Y, R or Z)."""
        spec = self.spec() if spec is None else spec
        v = self.values
        if isinstance(spec, StandardLogistic):
            return [v["z0"]]
        derivs = [v["y0"], v["y0_d1"]][: spec.g.n]
        if spec.g.n > 2:
            derivs += [0.0] * (spec.g.n - 2)
        if isinstance(spec, BurstGrowth):
            return derivs
        G = spec.price.G
        state = [r_transform(G, v["y0"])]
        if spec.g.n > 1:
            state.append(v["y0_d1"] * r_slope(G, v["y0"]))
            state += [0.0] * (spec.g.n - 2)
        return state


def resolve(
    flags: Mapping[str, object] | None = None,
    config_path: str | None = None,
    env: Mapping[str, str] | None = None,
) -> RunConfig:
    """Merge defaults < $MEMKICK_CONFIG < ``config_path`` < ``flags`` and validate."""
    env = os.environ if env is None else env
    layers: list[tuple[str, Mapping[str, object]]] = [("default", DEFAULTS)]
    env_path = env.get(ENV_VAR)
    if env_path:
        layers.append((f"env:{env_path}", load_config_file(env_path)))
    if config_path:
        layers.append((f"file:{config_path}", load_config_file(config_path)))
    if flags:
        layers.append(("flag", {_canonical(k): val for k, val in flags.items() if val is not None}))

    values: dict = {}
    origin: dict = {}
    for name, layer in layers:
        for key, raw in layer.items():
            values[key] = _coerce(key, raw)
            origin[key] = name
    cfg = RunConfig(values, origin)
    # Setting a logistic-only key without naming a map selects the logistic map.
    if not cfg.explicit("map") and (cfg.explicit("lambda") or cfg.explicit("z0")):
        cfg = cfg.with_map("logistic")
    return cfg
