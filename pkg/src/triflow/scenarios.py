"""Named reproducible runs and their deterministic file payloads.

Every emitter returns bytes so callers can diff, hash, or write them; the
metadata block embedded in each payload is sufficient to re-run it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .benchmarks import closed_form_i3_interaction, family_state
from .config import (
    RunConfig,
    SCENARIO_NAMES,
    SCENARIOS,
    config_from_mapping,
    config_to_mapping,
    family_params,
    surface_params,
)
from .correlations import correlation_report
from .dephasing import decoherence_time, information_timeseries, pointer_basis_time
from .nonmarkov import NMParams, nm_equilibrium, nm_log_analytic, nm_numeric, nm_surface
from .output import format_value, json_bytes, table_bytes

DEPHASE_COLUMNS = (
    "t", "thetaMinusAbs", "thetaPlusAbs", "c1p", "c2p", "c3p",
    "IAB", "I3", "discord", "accessible", "concurrence", "conservationResidual",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """A named run plus overrides; see SCENARIO_NAMES for valid names."""

    name: str
    overrides: dict = field(default_factory=dict)
    out_path: str | None = None
    fmt: str = "csv"
    seed: int = 1234

    def __post_init__(self) -> None:
        if self.name not in SCENARIO_NAMES:
            raise ValueError(f"unknown scenario {self.name!r}, expected one of {SCENARIO_NAMES}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")


def _table_payload(columns: dict, metadata: dict, fmt: str) -> bytes:
    if fmt == "csv":
        return table_bytes(columns, metadata)
    return json_bytes(
        {
            "metadata": {k: format_value(v) for k, v in metadata.items()},
            "columns": {k: [float(x) for x in v] for k, v in columns.items()},
        }
    )


def dephase_payload(cfg: RunConfig, metadata_head: dict | None = None,
                    markers: bool = False, fmt: str = "csv") -> bytes:
    """Time-series payload for one dephasing run.

    With markers=True, constant tD (and tPB where the initial coefficients
    define one) columns are appended for plotting convenience.
    """
    run = cfg.run()
    series = information_timeseries(run)
    columns = {"t": series.times}
    columns.update(series.columns)
    metadata = dict(metadata_head or {})
    metadata["version"] = __version__
    metadata.update(config_to_mapping(cfg))
    if markers:
        t_d = decoherence_time(run.bath)["tD"]
        columns["tD"] = np.full_like(series.times, t_d)
        metadata["tD"] = t_d
        try:
            t_pb = pointer_basis_time(run)
        except ValueError:
            t_pb = None
        if t_pb is not None and math.isfinite(t_pb):
            columns["tPB"] = np.full_like(series.times, t_pb)
            metadata["tPB"] = t_pb
    return _table_payload(columns, metadata, fmt)


def surface_payload(params: dict, fmt: str = "csv") -> bytes:
    """Witness surface over (mode count, inverse temperature)."""
    betas = np.linspace(params["betaMin"], params["betaMax"], params["betaPoints"])
    modes = np.arange(params["modesMin"], params["modesMax"] + 1)
    matrix = nm_surface(
        betas,
        modes,
        t=params["t"],
        omega0=params["omega0"],
        g0=params["g0"],
        g_a=params["gA"],
        g_b=params["gB"],
        delta_multiplier=params["deltaMultiplier"],
    )
    columns = {"N": modes.astype(float)}
    for j, beta in enumerate(betas):
        columns[format_value(float(beta))] = matrix[:, j]
    metadata = {"scenario": "fig3", "version": __version__}
    metadata.update(params)
    return _table_payload(columns, metadata, fmt)


def family_sweep_payload(params: dict, fmt: str = "csv") -> bytes:
    """Monogamy diagnostics of the noisy family on an x grid (numeric path)."""
    xs = np.linspace(0.0, 1.0, params["gridPoints"])
    i3 = np.empty_like(xs)
    interaction = np.empty_like(xs)
    bound = np.empty_like(xs)
    for j, x in enumerate(xs):
        rep = correlation_report(family_state(float(x)))
        i3[j] = rep.I3
        interaction[j] = rep.interaction
        bound[j] = min(
            rep.I_AC + rep.I_BC, rep.I_AB + rep.I_BC, rep.I_AB + rep.I_AC
        )
    columns = {
        "x": xs,
        "I3_over_4": i3 / 4.0,
        "interaction": interaction,
        "I3_minus_interaction": i3 - interaction,
        "bound_min_pairwise": bound,
    }
    metadata = {"scenario": "fig4", "version": __version__}
    metadata.update(params)
    return _table_payload(columns, metadata, fmt)


def appendix_payload(params: dict, fmt: str = "csv") -> bytes:
    """Closed forms next to numeric reports on the x grid."""
    xs = np.linspace(0.0, 1.0, params["gridPoints"])
    rows = {name: np.empty_like(xs) for name in (
        "I3_closed", "frakI_closed", "I3_numeric", "frakI_numeric", "bound_min_pairwise"
    )}
    for j, x in enumerate(xs):
        closed = closed_form_i3_interaction(float(x))
        rep = correlation_report(family_state(float(x)))
        rows["I3_closed"][j] = closed["I3"]
        rows["frakI_closed"][j] = closed["interaction"]
        rows["I3_numeric"][j] = rep.I3
        rows["frakI_numeric"][j] = rep.interaction
        rows["bound_min_pairwise"][j] = min(
            rep.I_AC + rep.I_BC, rep.I_AB + rep.I_BC, rep.I_AB + rep.I_AC
        )
    columns = {"x": xs, **rows}
    metadata = {"command": "appendix", "version": __version__}
    metadata.update(params)
    return _table_payload(columns, metadata, fmt)


def nm_payload(cfg: RunConfig, t_final: float) -> bytes:
    """Witness values for one bath: analytic log form, numeric, equilibrium."""
    params = NMParams(bath=cfg.bath(), t_final=t_final)
    return json_bytes(
        {
            "lnNmAnalytic": nm_log_analytic(params),
            "nmNumeric": nm_numeric(params),
            "nmEquilibrium": nm_equilibrium(params),
        }
    )


def scenario_bytes(name: str, overrides: dict, seed: int = 1234, fmt: str = "csv") -> bytes:
    """Payload for a named scenario with external-keyed overrides."""
    if name in SCENARIOS:
        preset = dict(SCENARIOS[name])
        preset.update(overrides)
        cfg = config_from_mapping(preset)
        return dephase_payload(
            cfg, metadata_head={"scenario": name}, markers=True, fmt=fmt
        )
    if name == "fig3":
        return surface_payload(surface_params(overrides), fmt=fmt)
    if name == "fig4":
        return family_sweep_payload(family_params(overrides), fmt=fmt)
    if name == "verify":
        from .verify import run_all

        eps_trunc = float(overrides.get("epsTrunc", 1e-12))
        modes_cap = int(overrides.get("modesCap", 3))
        report = run_all(seed=seed, eps_trunc=eps_trunc, modes_cap=modes_cap)
        return json_bytes(report.to_payload())
    raise ValueError(f"unknown scenario {name!r}")


def run_scenario(cfg: ScenarioConfig) -> int:
    """Write the scenario payload to its output path; 0 on success.

    The verify scenario returns 1 when any check fails, mirroring the
    verify subcommand's exit status.
    """
    payload = scenario_bytes(cfg.name, cfg.overrides, seed=cfg.seed, fmt=cfg.fmt)
    ext = "json" if (cfg.fmt == "json" or cfg.name == "verify") else "csv"
    path = cfg.out_path or f"{cfg.name}.{ext}"
    with open(path, "wb") as fh:
        fh.write(payload)
    if cfg.name == "verify":
        import json as _json

        return 0 if _json.loads(payload)["passed"] else 1
    return 0
