"""Tripartite information measures, monogamy diagnostics, and two-qubit
dephasing against finite thermal baths, with an exact truncated-bath oracle."""

__version__ = "0.1.0"

from .correlations import (
    BellDiagonalParams,
    CorrelationReport,
    accessible_information,
    bell_diagonal,
    concurrence_eof,
    correlation_report,
    monogamy_check,
    mutual_information,
    quantum_discord,
    state_information,
)
from .dephasing import (
    BathSpec,
    DephasingRun,
    decoherence_time,
    evolve_bell_diagonal,
    information_timeseries,
    phase_angles,
    pointer_basis_time,
    theta_complex,
    theta_floor,
    theta_modulus,
)
from .linalg import (
    BipartiteCut,
    DensityOperator,
    partial_trace,
    permute_subsystems,
    random_state,
    relative_entropy,
    tensor_product,
    von_neumann_entropy,
)

__all__ = [
    "__version__",
    "BellDiagonalParams",
    "CorrelationReport",
    "accessible_information",
    "bell_diagonal",
    "concurrence_eof",
    "correlation_report",
    "monogamy_check",
    "mutual_information",
    "quantum_discord",
    "state_information",
    "BathSpec",
    "DephasingRun",
    "decoherence_time",
    "evolve_bell_diagonal",
    "information_timeseries",
    "phase_angles",
    "pointer_basis_time",
    "theta_complex",
    "theta_floor",
    "theta_modulus",
    "BipartiteCut",
    "DensityOperator",
    "partial_trace",
    "permute_subsystems",
    "random_state",
    "relative_entropy",
    "tensor_product",
    "von_neumann_entropy",
]
