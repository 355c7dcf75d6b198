"""qperm: numerics for the permanence of quantum information.

Decision procedures and constructors for exact assisted cloning and
deletion, ensemble entropies and block compression, three-state
Hilbert-space geometry, and an exact teleportation micro-simulator,
with a CLI for file-driven scans and checks.
"""

from .statekit import (
    GramMatrix,
    Infeasible,
    OverlapError,
    StateSet,
    StateVector,
    UnitaryMap,
    check_min_overlap,
    gram,
    psd_check,
    realize_from_gram,
    unitary_equivalence,
)
from .cloning import (
    ClassicalAncillaReport,
    CloneInfeasibleError,
    FeasibilityReport,
    MixedStateSet,
    classical_ancilla_check,
    cloning_feasible,
    construct_cloner,
    generation_feasible,
)
from .deleting import (
    DeletionTrace,
    GramMismatchError,
    collapse_deleter_demo,
    is_valid_deleter,
    make_swap_deleter,
    recover_deleted,
)
from .compression import (
    CompressionPoint,
    DensityMatrix,
    Ensemble,
    density_matrix,
    dense_avg_fidelity,
    ensembles_equivalent,
    equiprobable_pair,
    rate_scan,
    schumacher_avg_fidelity,
    schumacher_weight,
    shannon_entropy,
    two_state_entropy,
    von_neumann_entropy,
)
from .geometry import (
    CounterexamplePair,
    NotFound,
    TripleInvariants,
    entropy_from_invariants,
    gram_from_invariants,
    invariants_from_states,
    overlap_dominance_counterexample,
    verify_counterexample,
    xi_scan,
)
from .teleport import TeleportTrace, independence_check, outcome_distribution, teleport

__version__ = "0.1.0"

__all__ = [
    "GramMatrix",
    "Infeasible",
    "OverlapError",
    "StateSet",
    "StateVector",
    "UnitaryMap",
    "check_min_overlap",
    "gram",
    "psd_check",
    "realize_from_gram",
    "unitary_equivalence",
    "ClassicalAncillaReport",
    "CloneInfeasibleError",
    "FeasibilityReport",
    "MixedStateSet",
    "classical_ancilla_check",
    "cloning_feasible",
    "construct_cloner",
    "generation_feasible",
    "DeletionTrace",
    "GramMismatchError",
    "collapse_deleter_demo",
    "is_valid_deleter",
    "make_swap_deleter",
    "recover_deleted",
    "CompressionPoint",
    "DensityMatrix",
    "Ensemble",
    "density_matrix",
    "dense_avg_fidelity",
    "ensembles_equivalent",
    "equiprobable_pair",
    "rate_scan",
    "schumacher_avg_fidelity",
    "schumacher_weight",
    "shannon_entropy",
    "two_state_entropy",
    "von_neumann_entropy",
    "CounterexamplePair",
    "NotFound",
    "TripleInvariants",
    "entropy_from_invariants",
    "gram_from_invariants",
    "invariants_from_states",
    "overlap_dominance_counterexample",
    "verify_counterexample",
    "xi_scan",
    "TeleportTrace",
    "independence_check",
    "outcome_distribution",
    "teleport",
    "__version__",
]
