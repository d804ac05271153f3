"""Qubit state restoration by cloning, estimation, and measurement reversal."""

from .cloning import (
    EstimationChannel,
    Outcome,
    elements_from_cloner,
    estimation_elements,
    outcome_probability,
    post_measurement_state,
    reverse,
    reversed_fidelity,
    reversed_fidelity_plane,
    uqcm_output,
)
from .core import (
    MAXIMALLY_MIXED,
    PAULI_X,
    PAULI_Z,
    ErrorType,
    KrausChannel,
    PureQubit,
    apply_channel,
    check_density_matrix,
    error_channel,
    error_probabilities,
    fidelity,
    make_pure,
    reduce_qubit,
    sample_element,
    state_vector,
)
from .linalg import (
    dagger,
    haar_random_unitary,
    hs_distance,
    is_hermitian,
    is_psd,
    is_unitary,
    nearest_unitary,
    polar_decompose,
    sqrtm_psd,
)
from .protocol import (
    MCResult,
    SweepRecord,
    TrajectoryRecord,
    alpha2_grid,
    analytic_fidelity,
    baseline_direct_fidelity,
    baseline_fidelity_plane,
    branch_statistics,
    correction_unitary,
    exact_fidelity,
    exact_fidelity_plane,
    grid_average,
    mc_estimate,
    mixed_input_fidelity,
    mixed_input_fidelity_plane,
    phi_grid,
    plane_average,
    run_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "EstimationChannel",
    "ErrorType",
    "KrausChannel",
    "MAXIMALLY_MIXED",
    "MCResult",
    "Outcome",
    "PAULI_X",
    "PAULI_Z",
    "PureQubit",
    "SweepRecord",
    "TrajectoryRecord",
    "alpha2_grid",
    "analytic_fidelity",
    "apply_channel",
    "baseline_direct_fidelity",
    "baseline_fidelity_plane",
    "branch_statistics",
    "check_density_matrix",
    "correction_unitary",
    "dagger",
    "elements_from_cloner",
    "error_channel",
    "error_probabilities",
    "estimation_elements",
    "exact_fidelity",
    "exact_fidelity_plane",
    "fidelity",
    "grid_average",
    "haar_random_unitary",
    "hs_distance",
    "is_hermitian",
    "is_psd",
    "is_unitary",
    "make_pure",
    "mc_estimate",
    "mixed_input_fidelity",
    "mixed_input_fidelity_plane",
    "nearest_unitary",
    "outcome_probability",
    "phi_grid",
    "plane_average",
    "polar_decompose",
    "post_measurement_state",
    "reduce_qubit",
    "reverse",
    "reversed_fidelity",
    "reversed_fidelity_plane",
    "run_trajectory",
    "sample_element",
    "sqrtm_psd",
    "state_vector",
    "uqcm_output",
]
