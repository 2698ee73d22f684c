"""Recurrence-sensitive witness built on the time-averaged coherence modulus.

The effective modulus |theta(t)| uses the slow channel g = g_min of the
bath; its running time average is the numeric witness.  A low-temperature
expansion turns the average into an exponential of averaged sinc terms,
with a closed equilibrium limit.  The analytic and equilibrium forms are
also provided in log space because cold or large baths push the witness
far below the smallest positive float.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import thread_cap
from .dephasing import BathSpec, _log_modulus, coupling_profile


@dataclass(frozen=True)
class NMParams:
    """Witness evaluation parameters: bath, horizon, integration control."""

    bath: BathSpec
    t_final: float
    phase_control: float = math.pi / 20.0

    def __post_init__(self) -> None:
        if self.t_final <= 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if self.phase_control <= 0:
            raise ValueError("phase_control must be positive")


def theta_effective(params: NMParams, t) -> float | np.ndarray:
    """Slow-channel coherence modulus at time t (vectorizes over arrays)."""
    out = np.exp(_log_modulus(params.bath, t, params.bath.g_min))
    return float(out[0]) if out.shape == (1,) else out


def cosine_average(params: NMParams, t: float) -> float:
    """(1/N) sum_k cos(2 g g_k t); equals 1 at t=0 and whenever g=0."""
    g = params.bath.g_min
    return float(np.mean(np.cos(2.0 * g * coupling_profile(params.bath) * t)))


def cosine_time_average(params: NMParams, t: float) -> float:
    """Running time average of cosine_average: mean of sinc(2 g g_k t)."""
    g = params.bath.g_min
    args = 2.0 * g * coupling_profile(params.bath) * t
    return float(np.mean(np.sinc(args / math.pi)))


def _integration_grid(params: NMParams) -> np.ndarray:
    g = params.bath.g_min
    fastest = 2.0 * g * float(np.max(coupling_profile(params.bath)))
    if fastest == 0.0:
        return np.array([0.0, params.t_final])
    step = params.phase_control / fastest
    n = max(2, math.ceil(params.t_final / step) + 1)
    return np.linspace(0.0, params.t_final, n)


def nm_numeric(params: NMParams) -> float:
    """Trapezoid time average of theta_effective over [0, t_final].

    The step keeps the fastest per-mode phase advance below phase_control
    radians, so recurrences are resolved rather than aliased.
    """
    grid = _integration_grid(params)
    values = np.exp(_log_modulus(params.bath, grid, params.bath.g_min))
    return float(np.trapezoid(values, grid) / params.t_final)


def nm_log_analytic(params: NMParams) -> float:
    """ln of the low-temperature closed form of the witness.

    ln NM = -N (1 - avg<c>(t)) / (4 sinh^2(beta_energy/2)); valid in the
    weak-coupling, cold-bath regime but evaluated literally everywhere.
    """
    bath = params.bath
    y0_sq = math.sinh(bath.beta_energy / 2.0) ** 2
    avg_c = cosine_time_average(params, params.t_final)
    return -bath.n_modes * (1.0 - avg_c) / (4.0 * y0_sq)


def nm_analytic(params: NMParams) -> float:
    return math.exp(nm_log_analytic(params))


def nm_log_equilibrium(params: NMParams) -> float:
    """Long-time limit of the analytic form: -N / (4 sinh^2(beta_energy/2))."""
    bath = params.bath
    return -bath.n_modes / (4.0 * math.sinh(bath.beta_energy / 2.0) ** 2)


def nm_equilibrium(params: NMParams) -> float:
    return math.exp(nm_log_equilibrium(params))


def nm_surface(
    beta_grid,
    n_grid,
    *,
    t: float = 1e6,
    omega0: float = 1.0,
    g0: float = 0.1,
    g_a: float = 1.0,
    g_b: float = 2.0,
    delta_multiplier: float = 10.0,
    hbar: float = 1.0,
) -> np.ndarray:
    """Analytic witness on the (mode count) x (inverse temperature) grid.

    Rows follow n_grid, columns follow beta_grid; each row's bath width is
    delta_multiplier times its mode count.  Rows are computed in parallel
    (capped by TRIFLOW_THREADS) and assembled in grid order.
    """
    betas = [float(b) for b in beta_grid]
    ns = [int(n) for n in n_grid]

    def row(n_modes: int) -> list[float]:
        out = []
        for beta in betas:
            bath = BathSpec(
                n_modes=n_modes, omega0=omega0, beta=beta, g0=g0,
                delta_width=delta_multiplier * n_modes, g_a=g_a, g_b=g_b, hbar=hbar,
            )
            out.append(nm_analytic(NMParams(bath=bath, t_final=t)))
        return out

    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        rows = list(pool.map(row, ns))
    return np.array(rows)
