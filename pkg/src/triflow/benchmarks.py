"""Reference tripartite states with known interaction information.

Three fixed states bracket the monogamy boundary (positive, zero, negative
interaction information), and a one-parameter noisy family crosses it at a
point that a bisection solver pins down from the closed forms.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .correlations import BellDiagonalParams
from .linalg import DensityOperator, permute_subsystems, tensor_product

FIXTURE_NAMES = ("even-parity", "pair-product", "classical-ghz")

# default factors for the pair-product fixture
_PHI_PLUS = np.zeros((4, 4), dtype=complex)
_PHI_PLUS[0, 0] = _PHI_PLUS[0, 3] = _PHI_PLUS[3, 0] = _PHI_PLUS[3, 3] = 0.5


def fixture(
    name: str,
    rho_ac: DensityOperator | None = None,
    rho_b: DensityOperator | None = None,
) -> DensityOperator:
    """Build one of the three reference three-qubit states.

    "even-parity": uniform mixture of the four even-parity basis states,
    interaction information +ln 2.  "pair-product": rho_AC x rho_B placed
    in A,B,C order, interaction information exactly 0 for any factors
    (defaults: maximally entangled AC pair, maximally mixed B).
    "classical-ghz": equal mixture of |000> and |111> projectors,
    interaction information -ln 2.
    """
    if name == "even-parity":
        mat = np.zeros((8, 8), dtype=complex)
        for idx in (0b000, 0b011, 0b101, 0b110):
            mat[idx, idx] = 0.25
        return DensityOperator(matrix=mat, dims=(2, 2, 2))
    if name == "pair-product":
        if rho_ac is None:
            rho_ac = DensityOperator(matrix=_PHI_PLUS, dims=(2, 2))
        if rho_b is None:
            rho_b = DensityOperator(matrix=np.eye(2) / 2, dims=(2,))
        acb = tensor_product(rho_ac, rho_b)
        return permute_subsystems(acb, (0, 2, 1))
    if name == "classical-ghz":
        mat = np.zeros((8, 8), dtype=complex)
        mat[0, 0] = mat[7, 7] = 0.5
        return DensityOperator(matrix=mat, dims=(2, 2, 2))
    raise ValueError(f"unknown fixture {name!r}, expected one of {FIXTURE_NAMES}")


def family_state(
    x: float,
    amplitudes: Sequence[complex] = (0.0, 0.0, 0.0, 1.0),
) -> DensityOperator:
    """White noise mixed with a four-amplitude three-qubit pure state.

    rho = ((1-x)/8) id + x |psi><psi| where
    |psi> = a|000> + b|010> + c|101> + d|111>.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    amps = np.asarray(amplitudes, dtype=complex)
    if amps.shape != (4,):
        raise ValueError("need exactly four amplitudes")
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"amplitudes not normalized: |.|^2 sums to {norm}")
    psi = np.zeros(8, dtype=complex)
    psi[[0b000, 0b010, 0b101, 0b111]] = amps
    mat = (1.0 - x) / 8.0 * np.eye(8, dtype=complex) + x * np.outer(psi, psi.conj())
    return DensityOperator(matrix=mat, dims=(2, 2, 2))


def _xlx(u: float) -> float:
    # u ln u with the continuous limit 0 at u = 0
    return u * math.log(u) if u > 0.0 else 0.0


def closed_form_i3_interaction(x: float) -> dict[str, float]:
    """Closed forms of I3 and the interaction information on the noisy family.

    Valid for amplitudes (0, 0, 0, 1).  Derived from the diagonal spectra of
    the state and its marginals; the three one-vs-two cuts are degenerate by
    symmetry, so I3 equals any of them.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    i3 = (
        _xlx(1 + 7 * x)
        - 3 * _xlx(1 - x)
        - 2 * _xlx(1 + 3 * x)
        - 4 * _xlx(1 + x)
    ) / 8.0
    interaction = i3 + (_xlx(1 - x) + 4 * _xlx(1 + x) - _xlx(1 + 3 * x)) / 2.0
    return {"I3": i3, "interaction": interaction}


def monogamy_crossing(tol: float = 1e-6) -> float:
    """Bisect for the noise level where the interaction information changes sign.

    The closed form is positive at x=0.3 and negative at x=0.6; the root is
    bracketed there and refined to ``tol``.
    """
    lo, hi = 0.3, 0.6
    f_lo = closed_form_i3_interaction(lo)["interaction"]
    if f_lo <= 0:
        raise ArithmeticError("lower bracket lost its sign")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if closed_form_i3_interaction(mid)["interaction"] > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def werner_like(c: float) -> BellDiagonalParams:
    """Bell-diagonal parameters (c, c, c); physical for -1 <= c <= 1/3."""
    return BellDiagonalParams(c1=c, c2=c, c3=c)


__all__ = [
    "FIXTURE_NAMES",
    "fixture",
    "family_state",
    "closed_form_i3_interaction",
    "monogamy_crossing",
    "werner_like",
]
