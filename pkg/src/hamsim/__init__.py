"""Exact and approximate simulation of k-local Hamiltonians by k'-local ones.

The core objects are :class:`PauliOperator` (symbolic Pauli-string sums with a
dense realization) and the analyses built on them: shared eigenspaces of
non-commuting pairs, fidelity bounds, connector optimization and parent
Hamiltonians.  ``python -m hamsim`` runs JSON scenario files.
"""
__version__ = "0.1.0"

from .errors import (
    CapacityError,
    CommutingPairError,
    ContractError,
    DimensionError,
    DomainError,
    HamsimError,
    IntegrityError,
)
from .pauli import (
    InteractionBasis,
    PauliOperator,
    PauliString,
    build_z_chain_target,
    commutator,
    generate_interaction_basis,
    hs_norm,
    pauli_product,
    random_operator,
    spectral_norm,
)
from .spectral import EigenSystem, cluster_degeneracies, eigensystem, evolve, kernel_basis, spectral_diameter
from .shared import (
    SharedSubspace,
    SimulatableSet,
    find_degeneracy_crossings,
    lemma1_bound,
    projected_connector,
    scan_coupling,
    shared_subspace,
    simulatable_sets,
    simultaneous_eigenbasis,
)
from .bounds import BoundReport, bch_convergence_check, bound_report, epsilon_star, weak_bounds
from .dynamics import fidelity, fidelity_sweep, state_preset, worst_case_fidelity, worst_case_fidelity_at_t
from .connector_opt import (
    DiameterOptions,
    OptimizationResult,
    SimulatorAnsatz,
    minimize_diameter,
    short_time_best_simulator,
)
from .parent import (
    correlation_matrix,
    det_sum_identity_check,
    necessary_condition_check,
    parent_exists,
    parent_hamiltonian,
)
