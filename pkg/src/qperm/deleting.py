"""Deleting unitaries, their validation, and resurrection of the deleted copy.

A deleter takes two copies of a state plus a fixed environment and returns
one copy, a blank register, and some environment remainder:
``psi (x) psi (x) A  ->  psi (x) blank (x) A_psi``. Unitarity forces the
remainder family ``{A_i}`` to have the same Gram matrix as the signal family,
so for families without orthogonal pairs the deleted copy can always be
rotated back out of the environment. This module constructs deleters,
validates arbitrary unitaries against the deletion contract, extracts the
environment records, and builds the recovery unitary.

Register layout is fixed as (system 1, system 2, environment) with row-major
(Kronecker) indexing, so matrices are bit-for-bit comparable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statekit import (
    EPS_PSD,
    MIN_OVERLAP,
    Infeasible,
    StateSet,
    StateVector,
    UnitaryMap,
    canonical_phase,
    gram,
    kron_all,
    require_min_overlap,
    unitary_equivalence,
)

EPS_DELETE = 1e-8  # fidelity/purity slack for accepting a deleter


class GramMismatchError(ValueError):
    """Environment records do not carry the signal Gram matrix."""

    def __init__(self, max_deviation: float):
        self.max_deviation = float(max_deviation)
        super().__init__(
            f"environment Gram deviates from the signal Gram by {max_deviation:.3e}; "
            "the supplied unitary was not a valid deleter for these states"
        )


@dataclass(frozen=True, eq=False)
class DeletionTrace:
    """Per-state evidence that a unitary implements deletion.

    ``valid`` holds iff every residual fidelity (first two registers against
    signal (x) blank) and every environment purity clears ``1 - EPS_DELETE``.
    ``environment_states`` holds the dominant eigenvector of each reduced
    environment state, phase-anchored against the full output vector.
    """

    valid: bool
    environment_states: StateSet
    residual_fidelities: tuple[float, ...]
    environment_purities: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class CollapseBranch:
    outcome: int
    probability: float
    correction: UnitaryMap


@dataclass(frozen=True, eq=False)
class CollapseDeletion:
    """Measure-and-rotate deletion record for one state.

    This route erases the copy for real, but it relies on measurement
    collapse and therefore sits outside the trace-preserving completely
    positive maps the rest of this package reasons about.
    """

    label: str
    branches: tuple[CollapseBranch, ...]
    inside_physical_model: bool = False


def _basis_swap_permutation(dim: int, env_dim: int) -> np.ndarray:
    """Permutation swapping register 2 with the leading d-dim slice of the environment."""
    total = dim * dim * env_dim
    perm = np.zeros((total, total), dtype=complex)
    for x in range(dim):
        for y in range(dim):
            for m in range(env_dim):
                src = (x * dim + y) * env_dim + m
                if m < dim:
                    dst = (x * dim + m) * env_dim + y
                else:
                    dst = src
                perm[dst, src] = 1.0
    return perm


def make_swap_deleter(
    dim: int,
    env_dim: int | None = None,
    env_unitary: UnitaryMap | np.ndarray | None = None,
) -> UnitaryMap:
    """Deleter that swaps the second copy out into the environment.

    The environment needs ``env_dim >= dim + 1``: a d-dimensional slice to
    receive the outgoing copy (whose 0 slot doubles as the blank source) plus
    at least one untouched level. An optional environment unitary is applied
    after the swap; anything non-unitary is rejected.
    """
    if dim < 1:
        raise ValueError(f"system dimension must be positive, got {dim}")
    if env_dim is None:
        env_dim = dim + 1
    if env_dim < dim + 1:
        raise ValueError(
            f"environment dimension {env_dim} is too small: need at least {dim + 1} "
            f"to hold the swapped-out copy and the blank source"
        )
    matrix = _basis_swap_permutation(dim, env_dim)
    if env_unitary is not None:
        if not isinstance(env_unitary, UnitaryMap):
            env_unitary = UnitaryMap(env_unitary)
        if env_unitary.dim != env_dim:
            raise ValueError(
                f"environment unitary acts on dimension {env_unitary.dim}, expected {env_dim}"
            )
        matrix = np.kron(np.eye(dim * dim), env_unitary.matrix) @ matrix
    return UnitaryMap(matrix)


def is_valid_deleter(
    unitary: UnitaryMap,
    psi: StateSet,
    blank: StateVector | None = None,
    env_init: StateVector | None = None,
    tol: float = EPS_DELETE,
) -> DeletionTrace:
    """Run a candidate deleter on every doubled signal and grade the output.

    For each state the unitary is applied to ``psi_i (x) psi_i (x) env_init``;
    the trace validates that registers (1, 2) carry ``psi_i (x) blank`` and
    that the environment comes out pure, and extracts the environment record.
    """
    dim = psi.dim
    if unitary.dim % (dim * dim) != 0:
        raise ValueError(
            f"unitary dimension {unitary.dim} does not factor as {dim}x{dim}x(environment)"
        )
    env_dim = unitary.dim // (dim * dim)
    if blank is None:
        blank = StateVector.basis(dim, 0)
    if env_init is None:
        env_init = StateVector.basis(env_dim, 0)
    if blank.dim != dim:
        raise ValueError(f"blank state has dimension {blank.dim}, expected {dim}")
    if env_init.dim != env_dim:
        raise ValueError(f"environment state has dimension {env_init.dim}, expected {env_dim}")

    fidelities = []
    purities = []
    records = []
    for state in psi.states:
        output = unitary.matrix @ kron_all(state.amplitudes, state.amplitudes, env_init.amplitudes)
        block = output.reshape(dim * dim, env_dim)
        target = np.kron(state.amplitudes, blank.amplitudes)
        fidelities.append(float(np.linalg.norm(block.conj().T @ target) ** 2))
        rho_env = block.T @ block.conj()
        purities.append(float(np.trace(rho_env @ rho_env).real))
        eigs, vecs = np.linalg.eigh(rho_env)
        dominant = canonical_phase(vecs[:, -1])
        anchor = complex(np.vdot(np.kron(target, dominant), output))
        if abs(anchor) > 1e-9:
            dominant = dominant * (anchor / abs(anchor))
        records.append(StateVector.normalized(dominant))

    valid = all(f >= 1.0 - tol for f in fidelities) and all(p >= 1.0 - tol for p in purities)
    return DeletionTrace(
        valid=valid,
        environment_states=StateSet(tuple(records), psi.labels),
        residual_fidelities=tuple(fidelities),
        environment_purities=tuple(purities),
    )


def recover_deleted(
    psi: StateSet,
    env: StateSet,
    min_overlap: float = MIN_OVERLAP,
    gram_tol: float = 1e-8,
) -> UnitaryMap:
    """Unitary rotating every environment record back onto its signal state.

    Requires the two Gram matrices to agree within ``gram_tol`` (anything
    else means the deleter was invalid) and the signal family to clear the
    pairwise-overlap floor, which is the scope on which the environment
    record is guaranteed to determine the state.
    """
    require_min_overlap(psi, min_overlap)
    deviation = float(np.max(np.abs(gram(psi).entries - gram(env).entries)))
    if deviation > gram_tol:
        raise GramMismatchError(deviation)
    result = unitary_equivalence(env, psi, tol=gram_tol)
    if isinstance(result, Infeasible):  # pragma: no cover - deviation checked above
        raise GramMismatchError(result.max_gram_deviation)
    return result


def _swap_to_front(dim: int, outcome: int) -> UnitaryMap:
    matrix = np.eye(dim, dtype=complex)
    if outcome != 0:
        matrix[[0, outcome]] = matrix[[outcome, 0]]
    return UnitaryMap(matrix)


def collapse_deleter_demo(psi: StateSet) -> tuple[CollapseDeletion, ...]:
    """Deletion by measurement collapse: measure, then rotate what was seen to 0.

    Returns, per state, the computational-basis outcome probabilities and the
    outcome-conditioned correction mapping the post-measurement state to the
    blank. Flagged as outside the physical-operation model, which admits only
    trace-preserving completely positive maps and excludes collapse.
    """
    demos = []
    for label, state in zip(psi.labels, psi.states):
        probs = np.abs(state.amplitudes) ** 2
        branches = tuple(
            CollapseBranch(outcome, float(p), _swap_to_front(state.dim, outcome))
            for outcome, p in enumerate(probs)
        )
        demos.append(CollapseDeletion(label=label, branches=branches))
    return tuple(demos)
