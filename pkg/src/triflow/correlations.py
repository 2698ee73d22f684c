"""Information measures for tripartite states and Bell-diagonal two-qubit tools.

The central object is the CorrelationReport: every entropy, every mutual
information, the local/total state information split, the interaction
information and the tripartite minimum for one state with three parts.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .linalg import (
    BipartiteCut,
    DensityOperator,
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    partial_trace,
    relative_entropy,
    shannon_entropy,
    tensor_product,
)

# Mutual informations may dip this far below zero from eigenvalue noise.
MI_FLOOR = -1e-9

# Dual computations of the same quantity must agree this tightly.
CROSSCHECK_ATOL = 1e-9


def state_information(rho: DensityOperator) -> float:
    """ln(dim) - S(rho): distance from the maximally mixed state in nats."""
    return math.log(rho.total_dim) - rho.entropy()


def mutual_information(rho: DensityOperator, cut: BipartiteCut) -> float:
    """S_x + S_y - S for the bipartition given by ``cut``."""
    s_keep = partial_trace(rho, cut).entropy()
    s_drop = partial_trace(rho, BipartiteCut(keep=cut.drop, drop=cut.keep)).entropy()
    return s_keep + s_drop - rho.entropy()


@dataclass(frozen=True)
class CorrelationReport:
    """Flat bundle of every correlation measure for one tripartite state.

    I_ABc, I_ACb, I_BCa are the one-vs-two mutual informations (pair vs the
    lone lowercase party).  info_total = info_local + I_T decomposes the
    state information into locally held and shared parts.  interaction is
    the six-entropy alternating sum whose sign decides monogamy.
    """

    S: float
    S_A: float
    S_B: float
    S_C: float
    S_AB: float
    S_AC: float
    S_BC: float
    I_AB: float
    I_AC: float
    I_BC: float
    I_ABc: float
    I_ACb: float
    I_BCa: float
    info_total: float
    info_local: float
    I_T: float
    interaction: float
    I3: float
    monogamous: bool

    def __post_init__(self) -> None:
        mis = (self.I_AB, self.I_AC, self.I_BC, self.I_ABc, self.I_ACb, self.I_BCa)
        if min(mis) < MI_FLOOR:
            raise ValueError(f"mutual information below floor: {min(mis)}")
        if abs(self.I3 - min(self.I_ABc, self.I_ACb, self.I_BCa)) > 1e-12:
            raise ValueError("I3 is not the minimum one-vs-two mutual information")
        if self.monogamous != (self.interaction >= MI_FLOOR):
            raise ValueError("monogamy flag disagrees with interaction sign")

    def to_dict(self) -> dict:
        return asdict(self)


def correlation_report(rho: DensityOperator) -> CorrelationReport:
    """Compute the full CorrelationReport for a state with three parts.

    I_T is computed twice, as the relative entropy to the product of
    marginals and as the average of all six mutual informations; the two
    must agree to CROSSCHECK_ATOL or an ArithmeticError is raised.
    """
    if rho.n_subsystems != 3:
        raise ValueError(f"need exactly three subsystems, got dims {rho.dims}")
    n = 3
    marg = {
        keep: partial_trace(rho, BipartiteCut.keeping(keep, n))
        for keep in [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    }
    s = rho.entropy()
    s_a, s_b, s_c = (marg[(i,)].entropy() for i in range(3))
    s_ab, s_ac, s_bc = (marg[k].entropy() for k in [(0, 1), (0, 2), (1, 2)])

    i_ab = s_a + s_b - s_ab
    i_ac = s_a + s_c - s_ac
    i_bc = s_b + s_c - s_bc
    i_abc = s_ab + s_c - s
    i_acb = s_ac + s_b - s
    i_bca = s_bc + s_a - s

    i_t = s_a + s_b + s_c - s
    product = tensor_product(marg[(0,)], marg[(1,)], marg[(2,)])
    i_t_rel = relative_entropy(rho, product)
    if abs(i_t - i_t_rel) > CROSSCHECK_ATOL:
        raise ArithmeticError(
            f"total correlation cross-check failed: {i_t} vs {i_t_rel}"
        )

    d = rho.total_dim
    info_total = math.log(d) - s
    info_local = info_total - i_t

    interaction = s_ab + s_ac + s_bc - s_a - s_b - s_c - s
    i3 = min(i_abc, i_acb, i_bca)

    return CorrelationReport(
        S=s, S_A=s_a, S_B=s_b, S_C=s_c, S_AB=s_ab, S_AC=s_ac, S_BC=s_bc,
        I_AB=i_ab, I_AC=i_ac, I_BC=i_bc, I_ABc=i_abc, I_ACb=i_acb, I_BCa=i_bca,
        info_total=info_total, info_local=info_local, I_T=i_t,
        interaction=interaction, I3=i3,
        monogamous=bool(interaction >= MI_FLOOR),
    )


@dataclass(frozen=True)
class MonogamyCheck:
    monogamous: bool
    slack: float
    result2_bound: float


def monogamy_check(rho: DensityOperator) -> MonogamyCheck:
    """Decide whether shared information is monogamous for this state.

    slack is the interaction information; result2_bound is the smallest
    sum of the two pairwise mutual informations with a common party.  The
    identity I3 = result2_bound + slack is asserted to CROSSCHECK_ATOL.
    """
    rep = correlation_report(rho)
    # grouped by the common party: C, B, A
    bound = min(
        rep.I_AC + rep.I_BC,
        rep.I_AB + rep.I_BC,
        rep.I_AB + rep.I_AC,
    )
    residual = rep.I3 - bound - rep.interaction
    if abs(residual) > CROSSCHECK_ATOL:
        raise ArithmeticError(f"decomposition identity violated by {residual}")
    return MonogamyCheck(
        monogamous=rep.monogamous,
        slack=rep.interaction,
        result2_bound=bound,
    )


@dataclass(frozen=True)
class BellDiagonalParams:
    """Three correlation coefficients of a two-qubit Bell-diagonal state."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self) -> None:
        for c in (self.c1, self.c2, self.c3):
            if not -1.0 <= c <= 1.0:
                raise ValueError(f"coefficient {c} outside [-1, 1]")
        lam = self.spectrum()
        if min(lam) < -1e-12:
            raise ValueError(f"unphysical coefficients, eigenvalue {min(lam)}")

    def spectrum(self) -> tuple[float, float, float, float]:
        c1, c2, c3 = self.c1, self.c2, self.c3
        return (
            (1 - c1 - c2 - c3) / 4,
            (1 - c1 + c2 + c3) / 4,
            (1 + c1 - c2 + c3) / 4,
            (1 + c1 + c2 - c3) / 4,
        )


def bell_diagonal(params: BellDiagonalParams) -> DensityOperator:
    """rho = (1/4)(id + sum_i c_i sigma_i x sigma_i); both marginals are id/2."""
    mat = np.kron(IDENTITY_2, IDENTITY_2).astype(complex)
    for c, sigma in ((params.c1, SIGMA_X), (params.c2, SIGMA_Y), (params.c3, SIGMA_Z)):
        mat += c * np.kron(sigma, sigma)
    return DensityOperator(matrix=mat / 4.0, dims=(2, 2))


def accessible_information(params: BellDiagonalParams) -> float:
    """Classical correlation extractable by the best local measurement.

    Closed form for Bell-diagonal states: a function of the largest
    coefficient magnitude alone.
    """
    c_t = max(abs(params.c1), abs(params.c2), abs(params.c3))
    return _half_log_mix(c_t)


def _half_log_mix(c: float) -> float:
    # (1+c)/2 ln(1+c) + (1-c)/2 ln(1-c), continuous limit 0 ln 0 = 0 at c=1
    out = 0.0
    if c < 1.0:
        out += (1.0 - c) / 2.0 * math.log(1.0 - c)
    if c > -1.0:
        out += (1.0 + c) / 2.0 * math.log(1.0 + c)
    return out


def quantum_discord(params: BellDiagonalParams) -> float:
    """D = I_{A:B} - J for a Bell-diagonal state, in nats."""
    total = 2.0 * math.log(2.0) - shannon_entropy(np.array(params.spectrum()))
    return total - accessible_information(params)


def concurrence_eof(rho: DensityOperator) -> dict[str, float]:
    """Wootters concurrence and entanglement of formation of a two-qubit state.

    Returns {"concurrence": C, "eof": nats} with
    C = max(0, l1-l2-l3-l4) from the square-root eigenvalues of the
    spin-flipped product and EoF the binary entropy of (1+sqrt(1-C^2))/2.
    """
    if rho.dims != (2, 2):
        raise ValueError(f"need a two-qubit state, got dims {rho.dims}")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    r = rho.matrix @ yy @ rho.matrix.conj() @ yy
    lam = np.sqrt(np.clip(np.linalg.eigvals(r).real, 0.0, None))
    lam = np.sort(lam)[::-1]
    c = max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
    if c >= 1.0:
        eof = math.log(2.0)
    else:
        p = (1.0 + math.sqrt(1.0 - c * c)) / 2.0
        eof = -p * math.log(p) - (1.0 - p) * math.log1p(-p) if p < 1.0 else 0.0
    return {"concurrence": c, "eof": eof}
