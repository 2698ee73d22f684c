"""Independent reference implementations used only to cross-check the package.

Everything here deliberately uses a different algorithm than the library:
partial traces via projector sandwiches instead of einsum, accessible
information via a brute-force measurement grid instead of the closed form,
integrals via scipy quadrature instead of algebra.  Slow and simple on
purpose.
"""

import math

import numpy as np
import scipy.integrate
import scipy.linalg

PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)


def ptrace_projectors(mat, dims, keep):
    """Partial trace as sum_j (id (x) <j|) rho (id (x) |j>)."""
    dims = tuple(dims)
    keep = tuple(keep)
    drop = tuple(i for i in range(len(dims)) if i not in keep)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    out = np.zeros((d_keep, d_keep), dtype=complex)
    drop_dims = [dims[i] for i in drop]
    for combo in np.ndindex(*drop_dims):
        levels = dict(zip(drop, combo))
        bra = np.ones((1, 1))
        for site, d in enumerate(dims):
            if site in levels:
                factor = np.zeros((1, d))
                factor[0, levels[site]] = 1.0
            else:
                factor = np.eye(d)
            bra = np.kron(bra, factor)
        out += bra @ mat @ bra.conj().T
    return out


def entropy_exact(mat):
    lam = scipy.linalg.eigvalsh(np.asarray(mat, dtype=complex))
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log(lam)))


def measurement_grid():
    """720 Bloch directions, including all six coordinate axes."""
    polar = np.linspace(0.0, math.pi, 15)
    azimuth = np.linspace(0.0, 2.0 * math.pi, 48, endpoint=False)
    dirs = []
    for th in polar:
        for ph in azimuth:
            dirs.append(
                (
                    math.sin(th) * math.cos(ph),
                    math.sin(th) * math.sin(ph),
                    math.cos(th),
                )
            )
    return np.array(dirs)


def brute_accessible(mat):
    """Best projective measurement on qubit B: max over the direction grid
    of S(A) - sum_b p_b S(A|b)."""
    rho_a = ptrace_projectors(mat, (2, 2), (0,))
    s_a = entropy_exact(rho_a)
    eye = np.eye(2, dtype=complex)
    best = -np.inf
    for nx, ny, nz in measurement_grid():
        ndots = nx * PAULI[0] + ny * PAULI[1] + nz * PAULI[2]
        conditional = 0.0
        for sign in (1.0, -1.0):
            proj = (eye + sign * ndots) / 2.0
            big = np.kron(eye, proj)
            sub = big @ mat @ big
            p = float(np.trace(sub).real)
            if p < 1e-12:
                continue
            conditional += p * entropy_exact(ptrace_projectors(sub, (2, 2), (0,)) / p)
        best = max(best, s_a - conditional)
    return float(best)


def geometric_theta(beta_energy, couplings, g_sum, t, n_max):
    """Thermal phase average as a closed-form truncated geometric series."""
    q = math.exp(-beta_energy)
    norm = (1.0 - q ** (n_max + 1)) / (1.0 - q)
    out = 1.0 + 0.0j
    for g_k in couplings:
        z = q * np.exp(-2j * g_sum * g_k * t)
        out *= ((1.0 - z ** (n_max + 1)) / (1.0 - z)) / norm
    return complex(out)


def ohmic_power_quad(eta, omega_c, s):
    """integral of eta w^s wc^(1-s) exp(-w/wc) over w >= 0."""
    value, _ = scipy.integrate.quad(
        lambda w: eta * w**s * omega_c ** (1.0 - s) * math.exp(-w / omega_c),
        0.0,
        np.inf,
    )
    return float(value)


def coupling_power_quad(g0, delta):
    """(1/2) integral of g0^2 exp(-2 k^2 / delta^2) over k >= 0."""
    value, _ = scipy.integrate.quad(
        lambda k: g0 * g0 * math.exp(-2.0 * k * k / (delta * delta)), 0.0, np.inf
    )
    return 0.5 * float(value)
