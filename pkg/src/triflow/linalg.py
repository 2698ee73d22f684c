"""Density operators on finite tensor products, entropies, and random states.

Everything downstream works in natural logarithms. Entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

# Hermiticity / trace / positivity slack for validated constructors.
ATOL_HERMITIAN = 1e-10
ATOL_TRACE = 1e-10
ATOL_EIGENVALUE = 1e-10

# Eigenvalues below this are treated as exact zeros when clipping spectra.
EIGENVALUE_CLIP = 1e-12

# Refuse to build product states larger than this unless the caller raises it.
MAX_TOTAL_DIM = 4096

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def _as_dims(dims: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise ValueError(f"subsystem dimensions must be positive, got {out}")
    return out


@dataclass(frozen=True)
class DensityOperator:
    """A validated density matrix together with its tensor factorization.

    ``matrix`` is copied and checked for hermiticity, unit trace and
    positivity at construction.  The eigenvalue spectrum (descending,
    clipped at ``EIGENVALUE_CLIP`` and renormalized) is computed once and
    cached because every information measure needs it.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    spectrum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        dims = _as_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        d = int(np.prod(dims))
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if not np.allclose(mat, mat.conj().T, atol=ATOL_HERMITIAN):
            raise ValueError("matrix is not hermitian")
        tr = float(mat.trace().real)
        if abs(tr - 1.0) > ATOL_TRACE:
            raise ValueError(f"trace is {tr}, expected 1")
        eig = np.linalg.eigvalsh(mat)
        if eig.min() < -ATOL_EIGENVALUE:
            raise ValueError(f"matrix has negative eigenvalue {eig.min()}")
        spec = np.where(eig > EIGENVALUE_CLIP, eig, 0.0)[::-1]
        spec = spec / spec.sum()
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spectrum", spec)

    @property
    def total_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def entropy(self) -> float:
        return shannon_entropy(self.spectrum)


@dataclass(frozen=True)
class BipartiteCut:
    """A split of subsystem indices into a kept group and its complement."""

    keep: tuple[int, ...]
    drop: tuple[int, ...]

    @classmethod
    def keeping(cls, keep: Sequence[int], n_subsystems: int) -> "BipartiteCut":
        keep_t = tuple(sorted(int(k) for k in keep))
        if len(set(keep_t)) != len(keep_t):
            raise ValueError(f"duplicate indices in {keep_t}")
        if any(k < 0 or k >= n_subsystems for k in keep_t):
            raise ValueError(f"indices {keep_t} out of range for {n_subsystems} subsystems")
        drop = tuple(i for i in range(n_subsystems) if i not in keep_t)
        return cls(keep=keep_t, drop=drop)


def tensor_product(*states: DensityOperator, max_total_dim: int = MAX_TOTAL_DIM) -> DensityOperator:
    """Kronecker product of density operators, concatenating their dims."""
    if not states:
        raise ValueError("need at least one factor")
    total = 1
    for s in states:
        total *= s.total_dim
    # cheap overflow guard before any kron is materialized
    if total > max_total_dim:
        raise ValueError(f"total dimension {total} exceeds cap {max_total_dim}")
    mat = reduce(np.kron, (s.matrix for s in states))
    dims = tuple(d for s in states for d in s.dims)
    return DensityOperator(matrix=mat, dims=dims)


def partial_trace(state: DensityOperator, cut: BipartiteCut) -> DensityOperator:
    """Trace out ``cut.drop``, returning the reduced state on ``cut.keep``."""
    dims = state.dims
    n = len(dims)
    if set(cut.keep) | set(cut.drop) != set(range(n)) or set(cut.keep) & set(cut.drop):
        raise ValueError(f"cut {cut} does not partition {n} subsystems")
    tensor = state.matrix.reshape(dims + dims)
    # einsum with repeated letters on the traced row/column axes
    letters = "abcdefghijkl"
    if 2 * n > len(letters):
        raise ValueError(f"too many subsystems ({n})")
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in cut.drop:
        col[i] = row[i]
    out_row = "".join(row[i] for i in cut.keep)
    out_col = "".join(col[i] for i in cut.keep)
    sub = "".join(row) + "".join(col) + "->" + out_row + out_col
    kept_dims = tuple(dims[i] for i in cut.keep)
    d_keep = int(np.prod(kept_dims))
    reduced = np.einsum(sub, tensor).reshape(d_keep, d_keep)
    return DensityOperator(matrix=reduced, dims=kept_dims)


def permute_subsystems(state: DensityOperator, order: Sequence[int]) -> DensityOperator:
    """Reorder tensor factors so that new factor i is old factor order[i]."""
    dims = state.dims
    n = len(dims)
    order_t = tuple(int(i) for i in order)
    if sorted(order_t) != list(range(n)):
        raise ValueError(f"{order_t} is not a permutation of range({n})")
    tensor = state.matrix.reshape(dims + dims)
    axes = order_t + tuple(n + i for i in order_t)
    new_dims = tuple(dims[i] for i in order_t)
    d = state.total_dim
    mat = tensor.transpose(axes).reshape(d, d)
    return DensityOperator(matrix=mat, dims=new_dims)


def hermitian_spectrum(matrix: np.ndarray) -> np.ndarray:
    """Descending real eigenvalues of a hermitian matrix (no clipping)."""
    return np.linalg.eigvalsh(matrix)[::-1]


def shannon_entropy(probabilities: np.ndarray) -> float:
    """H(p) = -sum p ln p in nats, with 0 ln 0 = 0."""
    p = np.asarray(probabilities, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(state: DensityOperator) -> float:
    """S(rho) = -Tr rho ln rho in nats."""
    return state.entropy()


def relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> float:
    """S(rho || sigma) = Tr rho (ln rho - ln sigma) in nats.

    Infinite when rho has weight outside the support of sigma.  The
    support is decided by clipping sigma's spectrum at EIGENVALUE_CLIP;
    rho-weight above 1e-10 on the discarded kernel reports infinity.
    """
    if rho.total_dim != sigma.total_dim:
        raise ValueError("operands live on different spaces")
    w, v = np.linalg.eigh(sigma.matrix)
    support = w > EIGENVALUE_CLIP
    rho_in_basis = v.conj().T @ rho.matrix @ v
    diag = rho_in_basis.diagonal().real
    kernel_weight = float(diag[~support].sum())
    if kernel_weight > 1e-10:
        return math.inf
    tr_rho_ln_sigma = float(np.sum(diag[support] * np.log(w[support])))
    return -rho.entropy() - tr_rho_ln_sigma


def random_state(
    dims: Sequence[int],
    *,
    pure: bool,
    seed: int | np.random.Generator,
) -> DensityOperator:
    """Draw a random state on the given tensor factors.

    Pure states are normalized complex Gaussian vectors (Haar distributed
    after projection).  Mixed states are Ginibre draws A A^dag / Tr,
    equivalent to tracing half of a Haar pure state on the doubled space.
    """
    dims_t = _as_dims(dims)
    d = int(np.prod(dims_t))
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if pure:
        psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        psi /= np.linalg.norm(psi)
        mat = np.outer(psi, psi.conj())
    else:
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        mat = a @ a.conj().T
        mat /= mat.trace().real
    return DensityOperator(matrix=mat, dims=dims_t)
