"""Closed-form dephasing of two qubits against a finite thermal boson bath.

Both qubits couple through sigma_z to N modes of equal frequency with
Gaussian-profiled coupling constants.  Coherences evolve by thermal phase
averages theta_+/-(t); everything here is a function of those products:
the evolved Bell-diagonal parameters, decoherence and basis-selection
timescales, the modulus floor, and the per-time information measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .correlations import BellDiagonalParams, _half_log_mix, quantum_discord
from .linalg import SIGMA_Z

# Onset of the constant-accessible-information regime is detected by
# comparing evolved coefficient magnitudes within this slack.
ONSET_ATOL = 1e-12


@dataclass(frozen=True)
class BathSpec:
    """Static description of the bath and the qubit-bath couplings.

    All modes share one frequency omega0; mode k in 1..n_modes couples
    with strength g0 * exp(-k^2 / delta_width^2).  g_a and g_b scale how
    strongly each qubit feels the bath.
    """

    n_modes: int
    omega0: float = 1.0
    beta: float = 1.0
    g0: float = 0.1
    delta_width: float = 1.0
    g_a: float = 1.0
    g_b: float = 2.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError(f"need at least one mode, got {self.n_modes}")
        if self.beta <= 0 or self.omega0 <= 0 or self.delta_width <= 0:
            raise ValueError("beta, omega0 and delta_width must be positive")
        if self.g0 < 0:
            raise ValueError(f"g0 must be nonnegative, got {self.g0}")

    @property
    def beta_energy(self) -> float:
        """Dimensionless thermal exponent beta * hbar * omega0."""
        return self.beta * self.hbar * self.omega0

    @property
    def couplings(self) -> np.ndarray:
        return coupling_profile(self)

    @property
    def g_min(self) -> float:
        """Smaller of |g_a + g_b| and |g_a - g_b|: the slow dephasing channel."""
        return min(abs(self.g_a + self.g_b), abs(self.g_a - self.g_b))


def resolve_delta_width(value: float | str, n_modes: int) -> float:
    """Accept a literal width or an "x<mult>" multiple of the mode count."""
    if isinstance(value, str):
        if not value.startswith("x"):
            raise ValueError(f"width string must look like 'x10', got {value!r}")
        return float(value[1:]) * n_modes
    return float(value)


def coupling_profile(bath: BathSpec) -> np.ndarray:
    """g_k = g0 exp(-k^2/delta^2) for k = 1..n_modes."""
    k = np.arange(1, bath.n_modes + 1, dtype=float)
    return bath.g0 * np.exp(-(k**2) / bath.delta_width**2)


def _per_mode_phases(bath: BathSpec, t, g_sum: float) -> np.ndarray:
    """Angles 2 * g_sum * g_k * t, shaped (len(t), n_modes)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    return 2.0 * g_sum * np.multiply.outer(t_arr, bath.couplings)


def _log_modulus(bath: BathSpec, t, g_sum: float) -> np.ndarray:
    """ln of the thermal phase-average modulus, summed over modes.

    Per mode the modulus is (1 + sin^2(phase/2)/sinh^2(be/2))^(-1/2); working
    in logs keeps N >> 1 and high temperature free of underflow.
    """
    y0 = math.sinh(bath.beta_energy / 2.0)
    half = _per_mode_phases(bath, t, g_sum) / 2.0
    return -0.5 * np.log1p((np.sin(half) / y0) ** 2).sum(axis=-1)


def _phase_sum(bath: BathSpec, t, g_sum: float) -> np.ndarray:
    """Accumulated argument of the phase-average product.

    Each mode contributes -atan2(q sin phi, 1 - q cos phi) with
    q = exp(-beta_energy); every term lies in (-pi/2, pi/2), so the
    per-mode sum stays unwrapped across recurrences.
    """
    q = math.exp(-bath.beta_energy)
    phi = _per_mode_phases(bath, t, g_sum)
    return -np.arctan2(q * np.sin(phi), 1.0 - q * np.cos(phi)).sum(axis=-1)


def _scalar(arr: np.ndarray):
    return arr[0] if arr.shape == (1,) else arr


def theta_modulus(bath: BathSpec, t, sign: int) -> float | np.ndarray:
    """|theta_sign(t)| in (0, 1]; vectorizes over an array of times."""
    g_sum = bath.g_a + float(sign) * bath.g_b
    return _scalar(np.exp(_log_modulus(bath, t, g_sum)))


def theta_complex(bath: BathSpec, t, sign: int) -> complex | np.ndarray:
    """Thermal phase average theta_sign(t), assembled from per-mode sums."""
    g_sum = bath.g_a + float(sign) * bath.g_b
    log_mod = _log_modulus(bath, t, g_sum)
    phase = _phase_sum(bath, t, g_sum)
    return _scalar(np.exp(log_mod + 1j * phase))


def phase_angles(bath: BathSpec, t) -> dict[str, float]:
    """Local z-rotation angles that make the evolved coherences real.

    Conjugating with exp(-i phiA sigma_z) x exp(-i phiB sigma_z) (adjoint on
    the left) cancels the accumulated arguments of both theta products.
    """
    phi_plus = float(_scalar(_phase_sum(bath, t, bath.g_a + bath.g_b)))
    phi_minus = float(_scalar(_phase_sum(bath, t, bath.g_a - bath.g_b)))
    return {
        "phiA": -(phi_plus + phi_minus) / 4.0,
        "phiB": -(phi_plus - phi_minus) / 4.0,
    }


def realign_two_qubit(rho: np.ndarray, phi_a: float, phi_b: float) -> np.ndarray:
    """W^dag rho W with W = exp(-i phi_a sigma_z) x exp(-i phi_b sigma_z)."""
    w = np.kron(
        np.diag(np.exp(-1j * phi_a * np.diag(SIGMA_Z))),
        np.diag(np.exp(-1j * phi_b * np.diag(SIGMA_Z))),
    )
    return w.conj().T @ rho @ w


@dataclass(frozen=True)
class DephasingRun:
    """One dephasing experiment: bath, initial Bell-diagonal state, time grid."""

    bath: BathSpec
    initial: BellDiagonalParams
    t_grid: np.ndarray = field(default_factory=lambda: np.array([0.0]))

    def __post_init__(self) -> None:
        grid = np.asarray(self.t_grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("t_grid must be a nonempty 1-d array")
        if grid[0] < 0 or np.any(np.diff(grid) <= 0):
            raise ValueError("t_grid must be strictly increasing and nonnegative")
        object.__setattr__(self, "t_grid", grid)


def _mixed_coefficients(c1: float, c2: float, m_minus, m_plus):
    half_sum = (m_minus + m_plus) / 2.0
    half_diff = (m_minus - m_plus) / 2.0
    return c1 * half_sum + c2 * half_diff, c2 * half_sum + c1 * half_diff


def evolve_bell_diagonal(run: DephasingRun, t: float) -> BellDiagonalParams:
    """Evolved coefficients at time t; c3 is a constant of the motion."""
    m_minus = float(theta_modulus(run.bath, t, -1))
    m_plus = float(theta_modulus(run.bath, t, +1))
    c1p, c2p = _mixed_coefficients(run.initial.c1, run.initial.c2, m_minus, m_plus)
    return BellDiagonalParams(c1=c1p, c2=c2p, c3=run.initial.c3)


def decoherence_time(bath: BathSpec) -> dict[str, float]:
    """Gaussian-envelope decay time of the slow channel plus both rate forms.

    G is the exact root of half the summed squared couplings; G_approx is
    the integral shortcut (g0/2) sqrt(sqrt(pi/2) delta - 1), accurate when
    delta does not exceed the mode count.  tD uses the exact G and is
    infinite when both channel couplings cancel (g_min = 0).
    """
    g_exact = math.sqrt(0.5 * float(np.sum(coupling_profile(bath) ** 2)))
    arg = math.sqrt(math.pi / 2.0) * bath.delta_width - 1.0
    g_approx = (bath.g0 / 2.0) * math.sqrt(arg) if arg > 0 else 0.0
    g = bath.g_min
    if g == 0.0 or g_exact == 0.0:
        t_d = math.inf
    else:
        t_d = math.sinh(bath.beta_energy / 2.0) / (g * g_exact)
    return {"tD": t_d, "G": g_exact, "G_approx": g_approx}


def theta_floor(bath: BathSpec) -> float:
    """Smallest modulus any theta product can reach: tanh^N(beta_energy/2)."""
    return math.tanh(bath.beta_energy / 2.0) ** bath.n_modes


def pointer_basis_time(run: DephasingRun) -> float | None:
    """Instant after which the largest coefficient magnitude is |c3|.

    Defined for initial states with c2 = -eps c1 (eps = +1 or -1); the decay
    channel is then g = |g_a + eps g_b|.  Returns None when |c1| <= |c3|
    (the largest coefficient never changes identity) and infinity when the
    relevant channel does not decay at all.
    """
    c = run.initial
    if abs(c.c2 + c.c1) <= 1e-12:
        eps = +1.0
    elif abs(c.c2 - c.c1) <= 1e-12:
        eps = -1.0
    else:
        raise ValueError("initial state needs c2 = +/- c1 for a sharp transition")
    if abs(c.c1) <= abs(c.c3):
        return None
    if c.c3 == 0.0:
        return math.inf
    g = abs(run.bath.g_a + eps * run.bath.g_b)
    g_exact = decoherence_time(run.bath)["G"]
    if g == 0.0 or g_exact == 0.0:
        return math.inf
    t_d = math.sinh(run.bath.beta_energy / 2.0) / (g * g_exact)
    return t_d * math.sqrt(math.log(abs(c.c1) / abs(c.c3)))


def ohmic_map(bath: BathSpec, s: float) -> dict[str, float]:
    """Constant omega_c^2 eta of the continuum spectral density with the
    same integrated coupling power as this discrete bath.

    J(w) = eta w^s wc^(1-s) exp(-w/wc) integrates to eta wc^2 Gamma(1+s),
    matched against G^2 = sqrt(pi/32) g0^2 delta.
    """
    if s <= -1.0:
        raise ValueError(f"family exponent must exceed -1, got {s}")
    value = math.sqrt(math.pi / 32.0) * bath.g0**2 * bath.delta_width / math.gamma(1.0 + s)
    return {"eta_times_omegac_sq": value}


def log_time_grid(t_min: float, t_max: float, points_per_decade: int) -> np.ndarray:
    """Logarithmic grid from t_min to t_max inclusive."""
    if not 0 < t_min < t_max:
        raise ValueError("need 0 < t_min < t_max")
    decades = math.log10(t_max / t_min)
    n = max(2, int(round(points_per_decade * decades)) + 1)
    return np.geomspace(t_min, t_max, n)


@dataclass(frozen=True)
class TimeSeries:
    """Column-oriented result table plus the parameters that produced it."""

    times: np.ndarray
    columns: dict[str, np.ndarray]
    params: dict


def _bell_spectrum(c1, c2, c3) -> np.ndarray:
    """Eigenvalue arrays of Bell-diagonal states, stacked on the last axis."""
    return np.stack(
        [
            (1 - c1 - c2 - c3) / 4.0,
            (1 - c1 + c2 + c3) / 4.0,
            (1 + c1 - c2 + c3) / 4.0,
            (1 + c1 + c2 - c3) / 4.0,
        ],
        axis=-1,
    )


def _bell_entropy(c1, c2, c3) -> np.ndarray:
    lam = _bell_spectrum(c1, c2, c3)
    safe = np.where(lam > 0.0, lam, 1.0)
    return -np.sum(lam * np.log(safe), axis=-1)


def information_timeseries(run: DephasingRun) -> TimeSeries:
    """Evolved coefficients and every per-time information measure.

    I3 along the trajectory equals the mutual information the pair has lost
    to the bath.  The conservation residual I3 + discord - discord(0) is
    emitted only from the instant the largest coefficient is |c3| (NaN
    before); the relation it witnesses only holds in that regime.
    """
    bath, c = run.bath, run.initial
    t = run.t_grid
    m_minus = np.exp(_log_modulus(bath, t, bath.g_a - bath.g_b))
    m_plus = np.exp(_log_modulus(bath, t, bath.g_a + bath.g_b))
    c1p, c2p = _mixed_coefficients(c.c1, c.c2, m_minus, m_plus)
    c3p = np.full_like(c1p, c.c3)

    two_ln2 = 2.0 * math.log(2.0)
    iab = two_ln2 - _bell_entropy(c1p, c2p, c3p)
    iab0 = float(two_ln2 - _bell_entropy(c.c1, c.c2, c.c3))
    i3 = iab0 - iab

    c_t = np.maximum(np.abs(c1p), np.maximum(np.abs(c2p), np.abs(c3p)))
    accessible = np.array([_half_log_mix(float(v)) for v in c_t])
    discord = iab - accessible
    discord0 = quantum_discord(c)

    lam_max = np.max(_bell_spectrum(c1p, c2p, c3p), axis=-1)
    concurrence = np.maximum(0.0, 2.0 * lam_max - 1.0)

    settled = np.maximum(np.abs(c1p), np.abs(c2p)) <= np.abs(c3p) + ONSET_ATOL
    residual = np.where(settled, i3 + discord - discord0, np.nan)

    columns = {
        "thetaMinusAbs": m_minus,
        "thetaPlusAbs": m_plus,
        "c1p": c1p,
        "c2p": c2p,
        "c3p": c3p,
        "IAB": iab,
        "I3": i3,
        "discord": discord,
        "accessible": accessible,
        "concurrence": concurrence,
        "conservationResidual": residual,
    }
    params = {
        "N": bath.n_modes,
        "omega0": bath.omega0,
        "beta": bath.beta,
        "g0": bath.g0,
        "deltaWidth": bath.delta_width,
        "gA": bath.g_a,
        "gB": bath.g_b,
        "c1": c.c1,
        "c2": c.c2,
        "c3": c.c3,
    }
    return TimeSeries(times=t, columns=columns, params=params)
