"""Seeded random constructors for states, unitaries and densities.

Sweeps derive per-instance generators from a base seed via
``numpy.random.SeedSequence.spawn`` so that instances are independent and the
whole sweep is reproducible from one integer.
"""

from __future__ import annotations

import numpy as np

from .statekit import StateSet, StateVector, UnitaryMap, check_min_overlap


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child generators derived from one base seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(int(seed)).spawn(count)]


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state via a normalized complex Gaussian vector."""
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector.normalized(raw)


def random_unitary(dim: int, rng: np.random.Generator) -> UnitaryMap:
    """Haar-random unitary: QR of a complex Gaussian with phase-fixed diagonal."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(raw)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return UnitaryMap(q * phases[None, :])


def random_state_set(
    n_states: int,
    dim: int,
    rng: np.random.Generator,
    min_overlap: float | None = None,
    max_tries: int = 1000,
) -> StateSet:
    """Random family of pure states, optionally rejecting near-orthogonal pairs."""
    for _ in range(max_tries):
        states = tuple(random_state(dim, rng) for _ in range(n_states))
        candidate = StateSet(states, tuple(str(i) for i in range(n_states)))
        if min_overlap is None or check_min_overlap(candidate, min_overlap):
            return candidate
    raise RuntimeError(
        f"no {n_states}-state set in dimension {dim} cleared the overlap floor "
        f"{min_overlap} within {max_tries} draws"
    )


def random_density(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Random density matrix of the given rank (uniform mixing weights)."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    vecs = np.stack([random_state(dim, rng).amplitudes for _ in range(rank)])
    weights = rng.uniform(0.1, 1.0, size=rank)
    weights /= weights.sum()
    rho = (vecs.T * weights) @ vecs.conj()
    return 0.5 * (rho + rho.conj().T)
