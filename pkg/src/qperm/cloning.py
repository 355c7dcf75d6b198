"""Feasibility of state generation and exact assisted cloning.

The central question: given an indexed family of pure signal states (no
orthogonal pairs) and per-index ancilla states, can one physical operation
(trace-preserving completely positive map) produce an extra copy of the
signal for every index at once? The answer is governed by a single Hermitian
criterion matrix ``H``, the entrywise quotient of the ancilla-component Gram
matrix by the signal Gram matrix: the operation exists iff ``H`` is PSD, in
which case ``H`` is itself the Gram matrix of a valid family of environment
output states.

``generation_feasible`` decides the ancilla-only route, ``cloning_feasible``
the n-copies-assisted route. The two verdicts agree for every input; the
module computes them independently so that this equivalence stays an
empirical cross-check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .statekit import (
    EPS_HERM,
    EPS_PSD,
    MIN_OVERLAP,
    GramMatrix,
    Infeasible,
    StateSet,
    StateVector,
    UnitaryMap,
    _as_complex_matrix,
    _freeze,
    canonical_phase,
    check_min_overlap,
    gram,
    hermitian_deviation,
    kron_all,
    psd_check,
    realize_from_gram,
    require_min_overlap,
    unitary_equivalence,
)

EPS_MIX = 1e-12      # eigenvalue cutoff for mixed-ancilla components, relative
EPS_TRACE = 1e-10    # trace-1 slack for density matrices
COMMUTATOR_TOL = 1e-9
DISTINCT_STATE_TOL = 1e-9


class CloneInfeasibleError(ValueError):
    """Constructor refused because the instance is infeasible; report attached."""

    def __init__(self, report: "FeasibilityReport"):
        self.report = report
        super().__init__(
            "no exact cloner exists for this instance: criterion matrix has "
            f"minimum eigenvalue {report.min_eigenvalue:.6e}"
        )


@dataclass(frozen=True, eq=False)
class MixedStateSet:
    """Labelled family of density matrices on a common dimension."""

    rhos: tuple[np.ndarray, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        rhos = tuple(_as_complex_matrix(rho) for rho in self.rhos)
        labels = tuple(str(label) for label in self.labels)
        if not rhos:
            raise ValueError("a mixed-state set must contain at least one state")
        if len(labels) != len(rhos):
            raise ValueError(f"{len(rhos)} densities but {len(labels)} labels")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be distinct, got {labels}")
        dims = {rho.shape[0] for rho in rhos}
        if len(dims) != 1:
            raise ValueError(f"dimension mismatch among densities: {sorted(dims)}")
        for label, rho in zip(labels, rhos):
            dev = hermitian_deviation(rho)
            if dev > EPS_HERM:
                raise ValueError(f"density '{label}' deviates from Hermitian by {dev:.3e}")
            trace = float(np.trace(rho).real)
            if abs(trace - 1.0) > EPS_TRACE:
                raise ValueError(f"density '{label}' has trace {trace!r}, expected 1")
            ok, min_eig = psd_check(rho)
            if not ok:
                raise ValueError(f"density '{label}' is not PSD: min eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "rhos", tuple(_freeze(rho) for rho in rhos))
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.rhos)

    @property
    def dim(self) -> int:
        return int(self.rhos[0].shape[0])

    @classmethod
    def from_pure(cls, states: StateSet) -> "MixedStateSet":
        rhos = tuple(np.outer(s.amplitudes, s.amplitudes.conj()) for s in states.states)
        return cls(rhos, states.labels)


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    """Verdict plus witness data for one generation/cloning instance.

    ``h_matrix`` is indexed by flattened (state, ancilla-component) pairs,
    components ordered by decreasing eigenvalue; ``component_index`` records
    that flattening. When feasible, ``witness_gram`` equals ``h_matrix`` and
    is a legal Gram matrix for the environment output family.
    """

    feasible: bool
    h_matrix: np.ndarray
    min_eigenvalue: float
    witness_gram: GramMatrix | None
    component_index: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "h_matrix", _freeze(np.array(self.h_matrix, dtype=complex)))


@dataclass(frozen=True)
class ClassicalAncillaReport:
    """Commutation and support structure of an ancilla family, with the verdict."""

    commuting: bool
    feasible: bool
    supports_orthogonal: bool


def _pure_components(
    ancilla: MixedStateSet, cutoff: float = EPS_MIX
) -> tuple[np.ndarray, np.ndarray, tuple[tuple[str, int], ...]]:
    """Eigen-components of every ancilla above the relative weight cutoff.

    Returns (component rows, owner state index per row, (label, rank) pairs).
    Component phases are canonicalized so repeated runs and independent
    callers produce identical matrices.
    """
    rows = []
    owners = []
    index = []
    for state_idx, (label, rho) in enumerate(zip(ancilla.labels, ancilla.rhos)):
        eigs, vecs = np.linalg.eigh(rho)
        top = float(eigs[-1])
        order = [k for k in reversed(range(len(eigs))) if eigs[k] > cutoff * top]
        for comp_rank, k in enumerate(order):
            rows.append(canonical_phase(vecs[:, k]))
            owners.append(state_idx)
            index.append((label, comp_rank))
    return np.array(rows), np.array(owners, dtype=int), tuple(index)


def _require_alignment(psi: StateSet, ancilla: MixedStateSet) -> None:
    if psi.labels != ancilla.labels:
        raise ValueError(
            f"signal and ancilla labels must align: {psi.labels} vs {ancilla.labels}"
        )


def generation_feasible(
    psi: StateSet,
    ancilla: MixedStateSet,
    min_overlap: float = MIN_OVERLAP,
    psd_tol: float = EPS_PSD,
) -> FeasibilityReport:
    """Decide whether one physical operation maps every ancilla to its signal.

    Builds the criterion matrix ``H[(i,k),(j,l)] = <a_ik|a_jl> / <psi_i|psi_j>``
    over the ancilla eigen-components and PSD-tests it: a trace-preserving
    completely positive map sending each component to its signal exists iff
    environment states with Gram matrix ``H`` exist, i.e. iff ``H`` is PSD.

    Raises :class:`~qperm.statekit.OverlapError` when the signal family
    contains a pair below ``min_overlap``; the quotient is undefined there.
    """
    _require_alignment(psi, ancilla)
    require_min_overlap(psi, min_overlap)
    signal_gram = gram(psi).entries
    components, owners, index = _pure_components(ancilla)
    component_gram = components.conj() @ components.T
    h_matrix = component_gram / signal_gram[np.ix_(owners, owners)]
    feasible, min_eig = psd_check(h_matrix, psd_tol)
    witness = GramMatrix(h_matrix) if feasible else None
    return FeasibilityReport(feasible, h_matrix, min_eig, witness, index)


def cloning_feasible(
    psi: StateSet,
    ancilla: MixedStateSet,
    copies: int = 1,
    min_overlap: float = MIN_OVERLAP,
    psd_tol: float = EPS_PSD,
) -> FeasibilityReport:
    """Decide whether ``copies`` held copies plus the ancilla yield one more.

    The joint-input/joint-output criterion is evaluated literally, with no
    algebraic pre-cancellation:
    ``H'[(i,k),(j,l)] = g_ij^copies <a_ik|a_jl> / g_ij^(copies+1)`` for
    ``g_ij = <psi_i|psi_j>``. The verdict provably equals the one from
    :func:`generation_feasible` on every input; held copies never help.
    """
    if copies < 1:
        raise ValueError(f"copies must be at least 1, got {copies}")
    _require_alignment(psi, ancilla)
    require_min_overlap(psi, min_overlap)
    signal_gram = gram(psi).entries
    components, owners, index = _pure_components(ancilla)
    component_gram = components.conj() @ components.T

    expanded = signal_gram[np.ix_(owners, owners)]
    denominator = expanded ** (copies + 1)
    floor = min_overlap ** (copies + 1)
    denom_mod = np.abs(denominator)
    if floor == 0.0 or not np.all(np.isfinite(denom_mod)) or np.any(denom_mod < floor):
        raise ValueError(
            f"|<psi_i|psi_j>|^{copies + 1} underflows below the floor "
            f"{min_overlap}^{copies + 1}; reduce the copy count or raise the overlap floor"
        )
    h_matrix = (expanded**copies * component_gram) / denominator
    feasible, min_eig = psd_check(h_matrix, psd_tol)
    witness = GramMatrix(h_matrix) if feasible else None
    return FeasibilityReport(feasible, h_matrix, min_eig, witness, index)


def construct_cloner(
    psi: StateSet,
    ancilla: StateSet,
    min_overlap: float = MIN_OVERLAP,
    fidelity_tol: float = 1e-8,
) -> tuple[UnitaryMap, StateSet]:
    """Build an explicit cloning unitary for a feasible pure-ancilla instance.

    Registers are laid out as (signal, blank target, ancilla, environment)
    with the blank target and environment starting in their 0 basis states.
    The returned unitary maps every ``psi_i (x) |0> (x) a_i (x) |0>`` to
    ``psi_i (x) psi_i (x) C_i`` where the environment family ``{C_i}`` is
    realized from the feasibility witness. Tracing out everything past the
    first two registers leaves the clone pair with fidelity at least
    ``1 - fidelity_tol``; this is verified before returning.

    Raises :class:`CloneInfeasibleError` (with the report attached) when the
    instance is infeasible.
    """
    if psi.labels != ancilla.labels:
        raise ValueError(f"signal and ancilla labels must align: {psi.labels} vs {ancilla.labels}")
    require_min_overlap(psi, min_overlap)
    signal_gram = gram(psi).entries
    ancilla_gram = gram(ancilla).entries
    h_matrix = ancilla_gram / signal_gram
    feasible, min_eig = psd_check(h_matrix)
    index = tuple((label, 0) for label in psi.labels)
    if not feasible:
        raise CloneInfeasibleError(FeasibilityReport(False, h_matrix, min_eig, None, index))
    witness = GramMatrix(h_matrix)
    environment = realize_from_gram(witness, labels=psi.labels)

    dim = psi.dim
    anc_dim = ancilla.dim
    env_rank = environment.dim
    extra_dim = max(1, ceil(env_rank / anc_dim))  # environment register size
    joint_dim = anc_dim * extra_dim

    blank = np.zeros(dim, dtype=complex)
    blank[0] = 1.0
    env_init = np.zeros(extra_dim, dtype=complex)
    env_init[0] = 1.0

    inputs = []
    outputs = []
    for state, anc, env in zip(psi.states, ancilla.states, environment.states):
        env_padded = np.zeros(joint_dim, dtype=complex)
        env_padded[:env_rank] = env.amplitudes
        inputs.append(kron_all(state.amplitudes, blank, anc.amplitudes, env_init))
        outputs.append(kron_all(state.amplitudes, state.amplitudes, env_padded))
    input_set = StateSet.from_amplitudes(inputs, psi.labels)
    output_set = StateSet.from_amplitudes(outputs, psi.labels)

    unitary = unitary_equivalence(input_set, output_set)
    if isinstance(unitary, Infeasible):  # pragma: no cover - equal Grams by construction
        raise RuntimeError(
            f"input/output Gram matrices diverged by {unitary.max_gram_deviation:.3e}"
        )

    for label, inp, state in zip(psi.labels, inputs, psi.states):
        out = unitary.matrix @ inp
        block = out.reshape(dim * dim, joint_dim)
        target = np.kron(state.amplitudes, state.amplitudes)
        fidelity = float(np.linalg.norm(block.conj().T @ target) ** 2)
        if fidelity < 1.0 - fidelity_tol:
            raise ValueError(
                f"constructed cloner reaches fidelity {fidelity!r} on state '{label}', "
                f"below 1 - {fidelity_tol:.1e}"
            )
    return unitary, environment


def _supports_orthogonal(
    psi: StateSet,
    ancilla: MixedStateSet,
    support_tol: float = COMMUTATOR_TOL,
) -> bool:
    """Supports of every ancilla pair with distinct signals are orthogonal."""
    signal_gram = gram(psi).entries
    supports = []
    for rho in ancilla.rhos:
        eigs, vecs = np.linalg.eigh(rho)
        supports.append(vecs[:, eigs > EPS_MIX * float(eigs[-1])])
    for i in range(len(ancilla)):
        for j in range(i + 1, len(ancilla)):
            if abs(signal_gram[i, j]) > 1.0 - DISTINCT_STATE_TOL:
                continue  # same signal state; nothing to distinguish
            cross = supports[i].conj().T @ supports[j]
            if float(np.linalg.norm(cross, ord=2)) > support_tol:
                return False
    return True


def classical_ancilla_check(
    psi: StateSet,
    ancilla: MixedStateSet,
    min_overlap: float = MIN_OVERLAP,
    commutator_tol: float = COMMUTATOR_TOL,
) -> ClassicalAncillaReport:
    """Probe the classical-information structure of an ancilla family.

    ``commuting`` holds when all ancilla pairs commute (spectral norm of the
    commutator below ``commutator_tol``): the family then carries only
    classical information. ``supports_orthogonal`` holds when ancillas of
    distinct signals live on mutually orthogonal supports, i.e. the label is
    readable from the ancilla alone. Whenever commuting ancillas make
    generation feasible, their supports are necessarily orthogonal; callers
    can assert ``commuting and feasible implies supports_orthogonal``.

    Never raises. When the signal family contains a pair below
    ``min_overlap`` the quotient criterion is undefined; feasibility then
    falls back to the zero-completion test: component overlaps across
    (near-)orthogonal signal pairs must vanish, and the criterion matrix
    with zeros in those slots must be PSD.
    """
    _require_alignment(psi, ancilla)
    commuting = True
    for i in range(len(ancilla)):
        for j in range(i + 1, len(ancilla)):
            comm = ancilla.rhos[i] @ ancilla.rhos[j] - ancilla.rhos[j] @ ancilla.rhos[i]
            if float(np.linalg.norm(comm, ord=2)) > commutator_tol:
                commuting = False
                break
        if not commuting:
            break

    if check_min_overlap(psi, min_overlap):
        feasible = generation_feasible(psi, ancilla, min_overlap).feasible
    else:
        signal_gram = gram(psi).entries
        components, owners, _ = _pure_components(ancilla)
        component_gram = components.conj() @ components.T
        expanded = signal_gram[np.ix_(owners, owners)]
        small = np.abs(expanded) < min_overlap
        if np.any(np.abs(component_gram[small]) > COMMUTATOR_TOL):
            feasible = False  # orthogonal signals but overlapping ancilla components
        else:
            h_matrix = np.where(small, 0.0, component_gram / np.where(small, 1.0, expanded))
            h_matrix = 0.5 * (h_matrix + h_matrix.conj().T)
            feasible, _ = psd_check(h_matrix)

    supports_orthogonal = _supports_orthogonal(psi, ancilla)
    return ClassicalAncillaReport(commuting, feasible, supports_orthogonal)
