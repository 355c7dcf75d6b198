"""State families, Gram matrices, and unitaries between equal-Gram families.

Everything downstream reduces to the machinery in this module: inner-product
(Gram) matrices of finite families of pure states, PSD tests, factorization of
a Gram matrix back into vectors, and the constructive unitary mapping one
family onto another whenever their Gram matrices agree.

Conventions, fixed package-wide:

* inner products are conjugate-linear in the first slot
  (``<a|b> = vdot(a, b)``),
* vectors and matrices are dense ``complex128`` numpy arrays,
* tolerances are keyword arguments defaulting to the module constants below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS_NORM = 1e-10       # unit-norm slack for state vectors and Gram diagonals
EPS_HERM = 1e-10       # max-entry Hermiticity slack
EPS_PSD = 1e-9         # relative PSD slack: min eig >= -EPS_PSD * spectral norm
EPS_UNITARY = 1e-9     # spectral-norm slack for U^H U = I
EPS_ROUNDTRIP = 1e-8   # gram(realize_from_gram(G)) vs G, entrywise
EPS_MAP = 1e-8         # per-state residual of the equal-Gram unitary
MIN_OVERLAP = 1e-6     # default pairwise-overlap floor


class OverlapError(ValueError):
    """A pair of states falls below the pairwise-overlap floor.

    The feasibility criteria divide by pairwise inner products, so
    (near-)orthogonal pairs are rejected up front rather than propagated as
    huge matrix entries.
    """

    def __init__(self, label_a: str, label_b: str, overlap: float, floor: float):
        self.pair = (label_a, label_b)
        self.overlap = float(overlap)
        self.floor = float(floor)
        super().__init__(
            f"overlap |<{label_a}|{label_b}>| = {overlap:.3e} is below the "
            f"floor {floor:.3e}; the criterion is undefined for orthogonal pairs"
        )


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _as_complex_vector(values) -> np.ndarray:
    vec = np.array(values, dtype=complex).reshape(-1)
    if vec.size == 0:
        raise ValueError("expected a non-empty vector")
    return vec


def _as_complex_matrix(values) -> np.ndarray:
    mat = np.array(values, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {mat.shape}")
    return mat


def hermitian_deviation(matrix: np.ndarray) -> float:
    """Largest entrywise deviation of ``matrix`` from its conjugate transpose."""
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def spectral_norm_hermitian(matrix: np.ndarray) -> float:
    """Spectral norm of a Hermitian matrix via its eigenvalue range."""
    eigs = np.linalg.eigvalsh(matrix)
    return float(max(abs(eigs[0]), abs(eigs[-1])))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm complex amplitude vector carrying one pure state."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_complex_vector(self.amplitudes)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > EPS_NORM:
            raise ValueError(f"state vector norm {norm!r} differs from 1 beyond {EPS_NORM}")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    @classmethod
    def normalized(cls, values) -> "StateVector":
        """Build a state from any non-zero coefficient vector."""
        amps = _as_complex_vector(values)
        norm = float(np.linalg.norm(amps))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for dimension {dim}")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    def padded(self, dim: int) -> "StateVector":
        """Zero-pad into a larger dimension (no-op when dim already matches)."""
        if dim < self.dim:
            raise ValueError(f"cannot pad dimension {self.dim} down to {dim}")
        if dim == self.dim:
            return self
        amps = np.zeros(dim, dtype=complex)
        amps[: self.dim] = self.amplitudes
        return StateVector(amps)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(self.overlap(other)) ** 2)


@dataclass(frozen=True, eq=False)
class StateSet:
    """Labelled family of pure states sharing one dimension."""

    states: tuple[StateVector, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        states = tuple(self.states)
        labels = tuple(str(label) for label in self.labels)
        if not states:
            raise ValueError("a state set must contain at least one state")
        if len(labels) != len(states):
            raise ValueError(f"{len(states)} states but {len(labels)} labels")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be distinct, got {labels}")
        dims = {state.dim for state in states}
        if len(dims) != 1:
            raise ValueError(f"dimension mismatch among states: {sorted(dims)}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes stacked as rows, shape (n_states, dim)."""
        return np.array([state.amplitudes for state in self.states])

    @classmethod
    def from_amplitudes(cls, rows, labels=None) -> "StateSet":
        states = tuple(StateVector(row) for row in rows)
        if labels is None:
            labels = tuple(str(i) for i in range(len(states)))
        return cls(states, tuple(labels))

    def padded(self, dim: int) -> "StateSet":
        return StateSet(tuple(s.padded(dim) for s in self.states), self.labels)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian, unit-diagonal, PSD matrix of pairwise inner products."""

    entries: np.ndarray

    def __post_init__(self):
        entries = _as_complex_matrix(self.entries)
        dev = hermitian_deviation(entries)
        if dev > EPS_HERM:
            raise ValueError(f"Gram matrix deviates from Hermitian by {dev:.3e}")
        diag_dev = float(np.max(np.abs(np.diag(entries) - 1.0)))
        if diag_dev > EPS_NORM:
            raise ValueError(f"Gram diagonal deviates from 1 by {diag_dev:.3e}")
        ok, min_eig = psd_check(entries)
        if not ok:
            raise ValueError(f"Gram matrix is not PSD: min eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "entries", _freeze(entries))

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, eq=False)
class UnitaryMap:
    """Dense unitary matrix on a fixed dimension."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = _as_complex_matrix(self.matrix)
        dev = spectral_norm_hermitian(mat.conj().T @ mat - np.eye(mat.shape[0]))
        if dev > EPS_UNITARY:
            raise ValueError(f"matrix deviates from unitary by {dev:.3e} in spectral norm")
        object.__setattr__(self, "matrix", _freeze(mat))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def apply(self, state: StateVector) -> StateVector:
        if state.dim != self.dim:
            raise ValueError(f"cannot apply a {self.dim}-dim unitary to a {state.dim}-dim state")
        return StateVector(self.matrix @ state.amplitudes)


@dataclass(frozen=True)
class Infeasible:
    """Negative verdict for the equal-Gram test, carrying the witness deviation."""

    max_gram_deviation: float


def gram(states: StateSet) -> GramMatrix:
    """Matrix of pairwise inner products, conjugate-linear in the first slot."""
    rows = states.matrix
    return GramMatrix(rows.conj() @ rows.T)


def psd_check(matrix, tol: float = EPS_PSD, herm_tol: float = EPS_HERM) -> tuple[bool, float]:
    """Test positive semidefiniteness of a Hermitian matrix.

    Returns ``(verdict, min_eigenvalue)`` where the verdict allows a relative
    slack of ``tol`` times the spectral norm. Raises if the input deviates
    from Hermitian beyond ``herm_tol`` (entrywise).
    """
    mat = _as_complex_matrix(matrix)
    dev = hermitian_deviation(mat)
    if dev > herm_tol:
        raise ValueError(f"matrix deviates from Hermitian by {dev:.3e} (tolerance {herm_tol:.1e})")
    eigs = np.linalg.eigvalsh(mat)
    min_eig = float(eigs[0])
    spec = float(max(abs(eigs[0]), abs(eigs[-1])))
    return bool(min_eig >= -tol * spec), min_eig


def realize_from_gram(gram_matrix: GramMatrix, labels=None, rank_tol: float = EPS_PSD) -> StateSet:
    """Factor a Gram matrix into unit vectors reproducing it.

    The output lives in dimension equal to the numerical rank of the input
    (eigenvalues above ``rank_tol`` times the spectral norm). Factorization
    goes through the eigendecomposition rather than a triangular factorization
    so that near-singular inputs truncate cleanly.
    """
    entries = gram_matrix.entries
    eigs, vecs = np.linalg.eigh(entries)
    spec = float(max(abs(eigs[0]), abs(eigs[-1])))
    keep = eigs > rank_tol * spec
    if not np.any(keep):
        raise ValueError("Gram matrix has no eigenvalue above the rank cutoff")
    coeff = (vecs[:, keep] * np.sqrt(eigs[keep])).conj().T  # rank x n, columns are states
    # The kept-eigenvalue truncation can shave a near-unit column norm; renormalize.
    coeff /= np.linalg.norm(coeff, axis=0, keepdims=True)
    return StateSet.from_amplitudes(coeff.T, labels)


def overlap_violations(states: StateSet, floor: float = MIN_OVERLAP) -> list[tuple[str, str, float]]:
    """Pairs whose inner-product modulus falls below ``floor``."""
    entries = gram(states).entries
    bad = []
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            overlap = abs(entries[i, j])
            if overlap < floor:
                bad.append((states.labels[i], states.labels[j], float(overlap)))
    return bad


def check_min_overlap(states: StateSet, floor: float = MIN_OVERLAP) -> bool:
    """True iff every pairwise inner-product modulus is at least ``floor``."""
    return not overlap_violations(states, floor)


def require_min_overlap(states: StateSet, floor: float = MIN_OVERLAP) -> None:
    violations = overlap_violations(states, floor)
    if violations:
        label_a, label_b, overlap = violations[0]
        raise OverlapError(label_a, label_b, overlap, floor)


def _orthonormal_complement(frame: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the complement of the column span of ``frame``."""
    dim, rank = frame.shape
    if rank >= dim:
        return np.zeros((dim, 0), dtype=complex)
    full, _, _ = np.linalg.svd(frame, full_matrices=True)
    return full[:, rank:]


def unitary_equivalence(
    set_a: StateSet,
    set_b: StateSet,
    tol: float = EPS_ROUNDTRIP,
    map_tol: float = EPS_MAP,
) -> UnitaryMap | Infeasible:
    """Unitary sending each state of ``set_a`` to its partner in ``set_b``.

    Such a map exists exactly when the two Gram matrices agree; when they do
    not, the largest entrywise deviation is returned as an ``Infeasible``
    verdict instead. Both families are embedded in a single space of
    dimension ``max(set_a.dim, set_b.dim)``.

    The construction factorizes the shared Gram once, expresses both families
    through the same coefficient matrix against family-specific orthonormal
    frames, and completes the frame map by a deterministic basis of each
    orthogonal complement, so the returned map is exact up to rounding.
    """
    if len(set_a) != len(set_b):
        raise ValueError(f"cardinality mismatch: {len(set_a)} vs {len(set_b)} states")
    gram_a = gram(set_a).entries
    gram_b = gram(set_b).entries
    deviation = float(np.max(np.abs(gram_a - gram_b)))
    if deviation > tol:
        return Infeasible(deviation)

    dim = max(set_a.dim, set_b.dim)
    cols_a = set_a.padded(dim).matrix.T  # dim x n
    cols_b = set_b.padded(dim).matrix.T
    shared = 0.5 * (gram_a + gram_b)
    eigs, vecs = np.linalg.eigh(shared)
    spec = float(max(abs(eigs[0]), abs(eigs[-1])))
    keep = eigs > EPS_PSD * spec
    inv_root = vecs[:, keep] / np.sqrt(eigs[keep])
    frame_a = cols_a @ inv_root  # dim x rank, orthonormal columns
    frame_b = cols_b @ inv_root
    comp_a = _orthonormal_complement(frame_a)
    comp_b = _orthonormal_complement(frame_b)
    matrix = frame_b @ frame_a.conj().T + comp_b @ comp_a.conj().T
    # Polish to the nearest unitary; exact inputs are left untouched.
    left, _, right = np.linalg.svd(matrix)
    matrix = left @ right

    residual = float(np.max(np.linalg.norm(matrix @ cols_a - cols_b, axis=0)))
    if residual > map_tol:
        raise ValueError(
            f"equal-Gram unitary construction missed its target by {residual:.3e} "
            f"(tolerance {map_tol:.1e}); the Gram matrix is too ill-conditioned"
        )
    return UnitaryMap(matrix)


def weighted_gram(probs, gram_matrix: GramMatrix) -> np.ndarray:
    """Entries sqrt(p_i p_j) G_ij; shares its spectrum with the mixture operator.

    The nonzero eigenvalues of ``sum_i p_i |s_i><s_i|`` coincide with the
    nonzero eigenvalues of this matrix, which keeps entropy computations in
    the (usually much smaller) family-index space.
    """
    weights = np.sqrt(np.asarray(probs, dtype=float))
    return weights[:, None] * gram_matrix.entries * weights[None, :]


def kron_all(*vectors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more 1-d arrays, left to right."""
    out = np.asarray(vectors[0], dtype=complex)
    for vec in vectors[1:]:
        out = np.kron(out, np.asarray(vec, dtype=complex))
    return out


def canonical_phase(vector: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its largest entry is real positive."""
    idx = int(np.argmax(np.abs(vector)))
    pivot = vector[idx]
    if abs(pivot) == 0.0:
        return vector
    return vector * (pivot.conjugate() / abs(pivot))


__all__ = [
    "EPS_NORM",
    "EPS_HERM",
    "EPS_PSD",
    "EPS_UNITARY",
    "EPS_ROUNDTRIP",
    "EPS_MAP",
    "MIN_OVERLAP",
    "OverlapError",
    "StateVector",
    "StateSet",
    "GramMatrix",
    "UnitaryMap",
    "Infeasible",
    "gram",
    "psd_check",
    "realize_from_gram",
    "overlap_violations",
    "check_min_overlap",
    "require_min_overlap",
    "unitary_equivalence",
    "weighted_gram",
    "kron_all",
    "canonical_phase",
    "hermitian_deviation",
    "spectral_norm_hermitian",
]
