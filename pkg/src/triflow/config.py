"""Flat key-value run configuration, file loading, and override handling.

Config files are a flat TOML subset (top-level scalar keys only).  The
same external key names are accepted as command-line overrides and are
written back verbatim into output metadata so that every emitted file can
re-run itself.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - 3.10 fallback
    import tomli as tomllib

from .correlations import BellDiagonalParams
from .dephasing import (
    BathSpec,
    DephasingRun,
    log_time_grid,
    resolve_delta_width,
)


def thread_cap() -> int:
    """Worker count for parallel sections; TRIFLOW_THREADS wins when set."""
    raw = os.environ.get("TRIFLOW_THREADS")
    if raw is not None:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise ValueError(f"TRIFLOW_THREADS must be an integer, got {raw!r}") from exc
    return os.cpu_count() or 1


@dataclass(frozen=True)
class RunConfig:
    """One dephasing run: bath, initial coefficients, and the time grid."""

    n_modes: int = 10
    omega0: float = 1.0
    beta: float = 1.0
    g0: float = 0.1
    delta_width: float | str = "x10"
    g_a: float = 1.0
    g_b: float = 2.0
    c1: float = -0.8
    c2: float = -0.8
    c3: float = -0.8
    t_min: float = 1e-2
    t_max: float = 1e4
    points_per_decade: int = 600

    def bath(self) -> BathSpec:
        return BathSpec(
            n_modes=self.n_modes,
            omega0=self.omega0,
            beta=self.beta,
            g0=self.g0,
            delta_width=resolve_delta_width(self.delta_width, self.n_modes),
            g_a=self.g_a,
            g_b=self.g_b,
        )

    def initial(self) -> BellDiagonalParams:
        return BellDiagonalParams(c1=self.c1, c2=self.c2, c3=self.c3)

    def run(self) -> DephasingRun:
        grid = log_time_grid(self.t_min, self.t_max, self.points_per_decade)
        return DephasingRun(bath=self.bath(), initial=self.initial(), t_grid=grid)


# external config/metadata key <-> RunConfig attribute
KEY_MAP = {
    "N": "n_modes",
    "omega0": "omega0",
    "beta": "beta",
    "g0": "g0",
    "deltaWidth": "delta_width",
    "gA": "g_a",
    "gB": "g_b",
    "c1": "c1",
    "c2": "c2",
    "c3": "c3",
    "tMin": "t_min",
    "tMax": "t_max",
    "pointsPerDecade": "points_per_decade",
}

_INT_KEYS = {"N", "pointsPerDecade"}
_STRING_OK_KEYS = {"deltaWidth"}


def coerce_value(key: str, value):
    """Parse one external value to the type its key expects."""
    if key in _INT_KEYS:
        return int(value)
    if key in _STRING_OK_KEYS and isinstance(value, str) and value.startswith("x"):
        float(value[1:])  # validate the multiplier now
        return value
    return float(value)


def config_from_mapping(data: dict, base: RunConfig | None = None) -> RunConfig:
    """Apply external-keyed values on top of ``base`` (or the defaults)."""
    cfg = base if base is not None else RunConfig()
    updates = {}
    for key, value in data.items():
        if key not in KEY_MAP:
            raise ValueError(f"unknown config key {key!r}")
        updates[KEY_MAP[key]] = coerce_value(key, value)
    return replace(cfg, **updates)


def config_to_mapping(cfg: RunConfig) -> dict:
    """External-keyed view of a RunConfig, in KEY_MAP order."""
    by_attr = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    return {key: by_attr[attr] for key, attr in KEY_MAP.items()}


def load_config(path: str, base: RunConfig | None = None) -> RunConfig:
    """Read a flat TOML file of external keys."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            raise ValueError(f"config must be flat, key {key!r} is not a scalar")
    return config_from_mapping(data, base)


def parse_overrides(pairs: list[str]) -> dict:
    """Split ``key=value`` strings; values stay raw for coerce_value."""
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ValueError(f"override {pair!r} is not of the form key=value")
        out[key] = value
    return out


# named parameter presets; every value is an external config key
SCENARIOS = {
    "fig1a": {"beta": 1.0, "deltaWidth": "x10"},
    "fig1c": {"beta": 0.1, "deltaWidth": "x10"},
    "fig1e": {"beta": 0.1, "deltaWidth": "x1"},
    "fig2a": {"beta": 0.1, "deltaWidth": "x1", "c1": -0.6, "c2": -0.6, "c3": -0.6},
    "fig2b": {"beta": 0.1, "deltaWidth": "x1", "c1": -0.6, "c2": -0.6, "c3": -0.5},
}

# surface and family sweeps have their own key sets
SURFACE_DEFAULTS = {
    "betaMin": 0.05,
    "betaMax": 5.0,
    "betaPoints": 60,
    "modesMin": 1,
    "modesMax": 60,
    "t": 1e6,
    "omega0": 1.0,
    "g0": 0.1,
    "gA": 1.0,
    "gB": 2.0,
    "deltaMultiplier": 10.0,
}
_SURFACE_INTS = {"betaPoints", "modesMin", "modesMax"}

FAMILY_DEFAULTS = {"gridPoints": 101}

SCENARIO_NAMES = tuple(SCENARIOS) + ("fig3", "fig4", "verify")


def surface_params(overrides: dict) -> dict:
    out = dict(SURFACE_DEFAULTS)
    for key, value in overrides.items():
        if key not in out:
            raise ValueError(f"unknown surface key {key!r}")
        out[key] = int(value) if key in _SURFACE_INTS else float(value)
    return out


def family_params(overrides: dict) -> dict:
    out = dict(FAMILY_DEFAULTS)
    for key, value in overrides.items():
        if key not in out:
            raise ValueError(f"unknown sweep key {key!r}")
        out[key] = int(value)
    return out
