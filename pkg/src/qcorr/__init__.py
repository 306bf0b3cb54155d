"""Bell inequality for correlations, subsystem-correlation tomography and
entanglement demonstrations on 1 to 4 qubits."""

__version__ = "0.1.0"

from ._backend import NAME as backend
from .bell import (
    BellExperiment,
    BellReport,
    DichotomicObservable,
    bell_operator,
    bell_value,
    correlation_term,
    lhv_bound,
    pair_observable,
    single_qubit_chsh,
    tsirelson_check,
)
from .entanglement import flow_demo, mixing_away_demo, ppt_check, swap_protocol
from .linalg import hermitian_eigs, kron, trace_distance
from .sampling import EstimatedBellReport, ShotPlan, estimate_bell, sample_setting
from .states import (
    DensityOperator,
    MixtureSpec,
    StateVector,
    density_from_ket,
    mix,
    named_state,
    partial_trace,
    partial_transpose,
    projective_measure,
)
from .tomography import (
    CorrelationVector,
    correlations_of,
    pauli_word,
    real_hilbert_counting,
    reconstruct,
)

__all__ = [
    "BellExperiment",
    "BellReport",
    "CorrelationVector",
    "DensityOperator",
    "DichotomicObservable",
    "EstimatedBellReport",
    "MixtureSpec",
    "ShotPlan",
    "StateVector",
    "backend",
    "bell_operator",
    "bell_value",
    "correlation_term",
    "correlations_of",
    "density_from_ket",
    "estimate_bell",
    "flow_demo",
    "hermitian_eigs",
    "kron",
    "lhv_bound",
    "mix",
    "mixing_away_demo",
    "named_state",
    "partial_trace",
    "partial_transpose",
    "pair_observable",
    "pauli_word",
    "ppt_check",
    "projective_measure",
    "real_hilbert_counting",
    "reconstruct",
    "sample_setting",
    "single_qubit_chsh",
    "swap_protocol",
    "trace_distance",
    "tsirelson_check",
]
