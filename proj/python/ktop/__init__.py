"""Kicked top, spin coherent states and P-representation moment propagators."""

from ._core import (
    CSV_HEADER,
    ConfigError,
    KtopError,
    __version__,
    classical_step,
    classical_step_gamma,
    coherent_expectations,
    coherent_vector,
    export_rotation_matrix,
    floquet_operator,
    heisenberg_map_residual,
    identity_resolution_residual,
    kick_multiplier,
    moments_from_delta,
    moments_from_density,
    quantum_step,
    rotation_matrix,
    run_experiment,
    run_grid_point,
    spin_expectations,
    spin_matrices,
    unitary_exp,
    validate,
)
