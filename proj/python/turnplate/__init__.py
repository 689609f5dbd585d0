"""Quantum state turnplate simulation: rings with complex couplings.

Thin wrapper around the compiled extension; see the project README for the
full API and the CLI.
"""

from ._core import (  # noqa: F401
    Link,
    RingSpec,
    TurnplateError,
    __version__,
    block_reduce,
    build_hamiltonian,
    build_sector_hamiltonian,
    char_poly_check,
    default_weak_links,
    detect_symmetry,
    detect_transfer_time,
    determinant,
    effective_hamiltonian,
    evolve_state,
    fidelity,
    fit_matching,
    fit_spec,
    fock_basis,
    fock_fidelity_trace,
    fock_turnplate_meta,
    gauge_normalize,
    hermitian_eig,
    manifold_leakage,
    phase_identified,
    probability_trace,
    propagator,
    reduced_density,
    shift_operator,
    single_photon_oracle,
    split_hamiltonian,
    symmetry_labels,
    symmetry_projector,
    total_phase,
    transfer_matrix,
    uniform_ring_spectrum,
)
