"""Exact single-qubit teleportation with all measurement branches in hand.

One maximally entangled pair plus two classical bits move a qubit state
intact. The protocol here is evaluated analytically: all four measurement
branches are computed at once (no sampling), each branch is Pauli-corrected,
and the trace records branch probabilities and output fidelities. Two facts
carry the weight downstream: every corrected branch reproduces the input
with fidelity 1, and the branch distribution is uniform for every input, so
the two classical bits alone reveal nothing about the state.

Conventions: the joint register order is (input, pair half A, pair half B);
the measurement basis on the first two qubits is ordered
(phi+, psi+, phi-, psi-) and the matching corrections are (I, X, Z, XZ).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statekit import StateVector, _freeze

_SQRT_HALF = 1.0 / np.sqrt(2.0)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

CORRECTIONS = (PAULI_I, PAULI_X, PAULI_Z, PAULI_X @ PAULI_Z)


def bell_basis() -> np.ndarray:
    """Rows are the two-qubit measurement basis (phi+, psi+, phi-, psi-)."""
    return np.array(
        [
            [_SQRT_HALF, 0.0, 0.0, _SQRT_HALF],
            [0.0, _SQRT_HALF, _SQRT_HALF, 0.0],
            [_SQRT_HALF, 0.0, 0.0, -_SQRT_HALF],
            [0.0, _SQRT_HALF, -_SQRT_HALF, 0.0],
        ],
        dtype=complex,
    )


def computational_basis() -> np.ndarray:
    """Two-qubit computational basis; measuring here breaks the protocol."""
    return np.eye(4, dtype=complex)


@dataclass(frozen=True, eq=False)
class TeleportTrace:
    """Complete branch-by-branch record of one teleportation run."""

    input: StateVector
    outcome_probs: np.ndarray
    corrected_outputs: tuple[StateVector, ...]
    fidelities: tuple[float, ...]

    def __post_init__(self):
        probs = np.asarray(self.outcome_probs, dtype=float).reshape(-1)
        if probs.shape[0] != 4:
            raise ValueError(f"expected 4 outcome probabilities, got {probs.shape[0]}")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError(f"outcome probabilities sum to {float(probs.sum())!r}")
        if any(not 0.0 <= f <= 1.0 + 1e-12 for f in self.fidelities):
            raise ValueError("fidelities must lie in [0, 1]")
        object.__setattr__(self, "outcome_probs", _freeze(probs))


def _require_qubit(psi: StateVector) -> None:
    if psi.dim != 2:
        raise ValueError(f"teleportation moves single qubits; got dimension {psi.dim}")


def _branches(psi: StateVector, basis: np.ndarray) -> np.ndarray:
    """Unnormalized third-qubit branch vectors, one row per outcome."""
    pair = np.array([_SQRT_HALF, 0.0, 0.0, _SQRT_HALF], dtype=complex)
    joint = np.kron(psi.amplitudes, pair).reshape(4, 2)
    return basis.conj() @ joint


def teleport(psi: StateVector) -> TeleportTrace:
    """Run the protocol on one qubit, resolving all four branches exactly."""
    _require_qubit(psi)
    branches = _branches(psi, bell_basis())
    probs = np.linalg.norm(branches, axis=1) ** 2
    outputs = []
    fidelities = []
    for outcome in range(4):
        corrected = CORRECTIONS[outcome] @ branches[outcome]
        corrected = corrected / np.linalg.norm(corrected)
        outputs.append(StateVector(corrected))
        fidelities.append(float(abs(np.vdot(psi.amplitudes, corrected)) ** 2))
    return TeleportTrace(
        input=psi,
        outcome_probs=probs,
        corrected_outputs=tuple(outputs),
        fidelities=tuple(fidelities),
    )


def outcome_distribution(psi: StateVector, basis: np.ndarray | None = None) -> np.ndarray:
    """Branch probabilities of the measurement; uniform for the standard basis.

    Passing a different orthonormal ``basis`` (for instance
    :func:`computational_basis`) models a corrupted protocol whose outcome
    statistics do leak the input state.
    """
    _require_qubit(psi)
    branches = _branches(psi, bell_basis() if basis is None else np.asarray(basis, dtype=complex))
    return np.linalg.norm(branches, axis=1) ** 2


def independence_check(states, tol: float = 1e-10, basis: np.ndarray | None = None) -> bool:
    """True iff every sampled input yields the uniform branch distribution."""
    states = list(states)
    if not states:
        raise ValueError("expected at least one state to check")
    worst = max(
        float(np.max(np.abs(outcome_distribution(psi, basis) - 0.25))) for psi in states
    )
    return worst <= tol
