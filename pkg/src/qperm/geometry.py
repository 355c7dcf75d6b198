"""Three-state geometry: overlap invariants, the cycle phase, and entropy.

Up to per-state rephasing and a global unitary, a family of three pure states
is pinned down by four real numbers: the three squared pairwise overlaps and
the phase of the cyclic product of inner products. This module converts
between states, Gram matrices and those invariants, evaluates the mixture
entropy directly on the invariants, scans entropy against the cycle phase,
and searches for pairs of families in which every pairwise overlap grows yet
the entropy grows too, certifying that pairwise overlaps alone do not order
information content for three or more states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statekit import (
    EPS_PSD,
    GramMatrix,
    StateSet,
    gram,
    psd_check,
    realize_from_gram,
    weighted_gram,
)
from .compression import _entropy_of_eigenvalues, two_state_entropy

EPS_SEPARATION = 1e-4  # strictness margin for counterexample certificates
OVERLAP_FLOOR = 1e-12  # below this any overlap makes the cycle phase undefined

EQUIPROBABLE = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


@dataclass(frozen=True)
class TripleInvariants:
    """Squared overlaps and cycle phase of a three-state family.

    The induced Gram matrix is PSD iff
    ``det = 1 - a12 - a23 - a31 + 2 sqrt(a12 a23 a31) cos(xi) >= 0``
    (the 2x2 minors are automatic for entries in [0, 1]).
    """

    a12: float
    a23: float
    a31: float
    xi: float

    def __post_init__(self):
        for name in ("a12", "a23", "a31"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if not -math.pi < self.xi <= math.pi:
            raise ValueError(f"xi must lie in (-pi, pi], got {self.xi}")

    def determinant(self) -> float:
        product = self.a12 * self.a23 * self.a31
        return float(
            1.0
            - self.a12
            - self.a23
            - self.a31
            + 2.0 * math.sqrt(product) * math.cos(self.xi)
        )

    def is_feasible(self, tol: float = EPS_PSD) -> bool:
        return self.determinant() >= -tol


@dataclass(frozen=True)
class InfeasibleTriple:
    """Negative verdict for invariant realizability, carrying the determinant."""

    determinant: float


@dataclass(frozen=True, eq=False)
class CounterexamplePair:
    """Two realizable three-state Gram matrices certifying overlap non-monotonicity.

    Every squared pairwise overlap of ``gram_high`` exceeds the matching one
    of ``gram_low`` by at least the separation margin, and yet the
    equiprobable mixture entropy is higher as well.
    """

    gram_low: GramMatrix
    gram_high: GramMatrix
    entropy_low: float
    entropy_high: float
    overlap_deltas: tuple[float, float, float]


@dataclass(frozen=True)
class SearchStats:
    evaluations: int
    candidates: int
    best_entropy_margin: float


@dataclass(frozen=True)
class NotFound:
    """The search exhausted its budget; statistics attached."""

    stats: SearchStats


@dataclass(frozen=True)
class XiScanRow:
    xi: float
    cos_xi: float
    entropy_bits: float


@dataclass(frozen=True, eq=False)
class XiScanResult:
    rows: tuple[XiScanRow, ...]
    monotone: bool
    boundary_clipped: bool  # feasibility, not the full phase range, set the endpoint


def gram_from_invariants(
    invariants: TripleInvariants, psd_tol: float = EPS_PSD
) -> GramMatrix | InfeasibleTriple:
    """Canonical Gram matrix carrying the given invariants.

    Gauge: the whole cycle phase sits on the (1, 2) edge, the other two edges
    are real non-negative. Per-state rephasing can move the phase around the
    cycle but cannot change it, so one representative per orbit is enough.
    """
    r12 = math.sqrt(invariants.a12)
    r23 = math.sqrt(invariants.a23)
    r31 = math.sqrt(invariants.a31)
    phase = complex(math.cos(invariants.xi), math.sin(invariants.xi))
    entries = np.array(
        [
            [1.0, r12 * phase, r31],
            [r12 * phase.conjugate(), 1.0, r23],
            [r31, r23, 1.0],
        ],
        dtype=complex,
    )
    feasible, _ = psd_check(entries, psd_tol)
    if not feasible:
        return InfeasibleTriple(invariants.determinant())
    return GramMatrix(entries)


def invariants_from_states(states: StateSet, overlap_floor: float = OVERLAP_FLOOR) -> TripleInvariants:
    """Extract the four invariants from a family of exactly three states."""
    if len(states) != 3:
        raise ValueError(f"expected exactly 3 states, got {len(states)}")
    entries = gram(states).entries
    g12, g23, g31 = entries[0, 1], entries[1, 2], entries[2, 0]
    for name, value in (("g12", g12), ("g23", g23), ("g31", g31)):
        if abs(value) < overlap_floor:
            raise ValueError(
                f"overlap {name} has modulus {abs(value):.3e}; the cycle phase is "
                "undefined when any pair is orthogonal"
            )
    cycle = g12 * g23 * g31
    return TripleInvariants(
        a12=min(1.0, float(abs(g12)) ** 2),
        a23=min(1.0, float(abs(g23)) ** 2),
        a31=min(1.0, float(abs(g31)) ** 2),
        xi=float(np.angle(cycle)),
    )


def entropy_from_invariants(invariants: TripleInvariants, probs=EQUIPROBABLE) -> float:
    """Mixture entropy of three states realizing the invariants, in bits.

    Works on the weighted Gram spectrum, which equals the mixture-operator
    spectrum, so no states ever need to be realized.
    """
    probs = np.asarray(probs, dtype=float).reshape(-1)
    if probs.shape[0] != 3 or np.any(probs < 0.0) or abs(float(probs.sum()) - 1.0) > 1e-10:
        raise ValueError("expected a normalized probability 3-vector")
    realized = gram_from_invariants(invariants)
    if isinstance(realized, InfeasibleTriple):
        raise ValueError(
            f"invariants are infeasible: induced determinant {realized.determinant:.6e} < 0"
        )
    eigs = np.linalg.eigvalsh(weighted_gram(probs, realized))
    return _entropy_of_eigenvalues(eigs)


def feasible_xi_max(a12: float, a23: float, a31: float) -> float:
    """Largest feasible cycle phase in [0, pi] for the given squared overlaps."""
    for name, value in (("a12", a12), ("a23", a23), ("a31", a31)):
        if not 0.0 < value <= 1.0:
            raise ValueError(
                f"{name} must lie in (0, 1]; the cycle phase is undefined at zero overlap"
            )
    cos_min = (a12 + a23 + a31 - 1.0) / (2.0 * math.sqrt(a12 * a23 * a31))
    if cos_min > 1.0:
        raise ValueError(
            f"no feasible cycle phase: overlaps ({a12}, {a23}, {a31}) require "
            f"cos(xi) >= {cos_min:.6f}"
        )
    return math.acos(max(-1.0, cos_min))


def xi_scan(
    a12: float,
    a23: float,
    a31: float,
    grid_size: int = 101,
    probs=EQUIPROBABLE,
    margin: float = 1e-12,
) -> XiScanResult:
    """Entropy along the feasible cycle-phase range at fixed overlaps.

    The entropy depends on the phase only through its cosine (conjugating all
    states flips the sign and preserves the spectrum), so the grid covers
    ``xi in [0, xi_max]``. The verdict reports whether entropy is
    non-increasing in ``cos(xi)`` up to ``margin``.
    """
    if grid_size < 2:
        raise ValueError(f"grid size must be at least 2, got {grid_size}")
    xi_max = feasible_xi_max(a12, a23, a31)
    rows = []
    for xi in np.linspace(0.0, xi_max, grid_size):
        entropy = entropy_from_invariants(TripleInvariants(a12, a23, a31, float(xi)), probs)
        rows.append(XiScanRow(float(xi), math.cos(float(xi)), entropy))
    by_cos = sorted(rows, key=lambda row: row.cos_xi)
    monotone = all(
        later.entropy_bits <= earlier.entropy_bits + margin
        for earlier, later in zip(by_cos, by_cos[1:])
    )
    return XiScanResult(tuple(rows), monotone, boundary_clipped=xi_max < math.pi)


def _squared_overlaps(gram_matrix: GramMatrix) -> np.ndarray:
    entries = gram_matrix.entries
    return np.array([abs(entries[0, 1]) ** 2, abs(entries[1, 2]) ** 2, abs(entries[2, 0]) ** 2])


def verify_counterexample(pair: CounterexamplePair, sep: float = EPS_SEPARATION) -> bool:
    """Re-check a certificate by realizing both families and diagonalizing.

    Independent of the search path: states are rebuilt from the Gram
    matrices, the two mixture operators are formed and diagonalized densely,
    and the overlap and entropy margins are re-measured on the results.
    """
    entropies = []
    overlaps = []
    for gram_matrix in (pair.gram_low, pair.gram_high):
        states = realize_from_gram(gram_matrix)
        rows = states.matrix
        rho = (rows.T @ rows.conj()) / 3.0
        entropies.append(_entropy_of_eigenvalues(np.linalg.eigvalsh(rho)))
        overlaps.append(_squared_overlaps(gram(states)))
    if entropies[1] - entropies[0] < sep:
        return False
    return bool(np.all(overlaps[1] - overlaps[0] >= sep))


def _random_invariants(rng: np.random.Generator) -> TripleInvariants:
    a12, a23, a31 = rng.uniform(0.0, 1.0, size=3)
    xi = rng.uniform(0.0, math.pi)
    return TripleInvariants(float(a12), float(a23), float(a31), float(xi))


def random_feasible_invariants(
    rng: np.random.Generator, positive_overlaps: bool = False, max_tries: int = 10_000
) -> TripleInvariants:
    """Rejection-sample invariants whose Gram matrix is strictly PSD."""
    for _ in range(max_tries):
        candidate = _random_invariants(rng)
        if positive_overlaps and min(candidate.a12, candidate.a23, candidate.a31) <= 1e-3:
            continue
        if candidate.determinant() >= 1e-9:
            return candidate
    raise RuntimeError("failed to sample feasible invariants")


def _certificate(
    low: TripleInvariants, high: TripleInvariants, sep: float = EPS_SEPARATION
) -> CounterexamplePair | None:
    gram_low = gram_from_invariants(low)
    gram_high = gram_from_invariants(high)
    if isinstance(gram_low, InfeasibleTriple) or isinstance(gram_high, InfeasibleTriple):
        return None
    deltas = _squared_overlaps(gram_high) - _squared_overlaps(gram_low)
    pair = CounterexamplePair(
        gram_low=gram_low,
        gram_high=gram_high,
        entropy_low=entropy_from_invariants(low),
        entropy_high=entropy_from_invariants(high),
        overlap_deltas=tuple(float(d) for d in deltas),
    )
    if pair.entropy_high - pair.entropy_low < sep:
        return None
    if min(pair.overlap_deltas) < sep:
        return None
    return pair if verify_counterexample(pair, sep) else None


def _entropy_quick(a: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Vectorized equiprobable entropy from stacked invariant rows."""
    n = a.shape[0]
    grams = np.ones((n, 3, 3), dtype=complex)
    roots = np.sqrt(a)
    phase = np.exp(1j * xi)
    grams[:, 0, 1] = roots[:, 0] * phase
    grams[:, 1, 0] = np.conj(grams[:, 0, 1])
    grams[:, 1, 2] = roots[:, 1]
    grams[:, 2, 1] = roots[:, 1]
    grams[:, 2, 0] = roots[:, 2]
    grams[:, 0, 2] = roots[:, 2]
    eigs = np.linalg.eigvalsh(grams / 3.0)
    eigs = np.clip(eigs, 0.0, None)
    safe = np.where(eigs > 1e-14, eigs, 1.0)
    return -(safe * np.log2(safe)).sum(axis=1)


def _search_random(
    rng: np.random.Generator, budget: int, sep: float
) -> tuple[CounterexamplePair | None, SearchStats]:
    evaluations = 0
    candidates = 0
    best_margin = -math.inf
    batch = 512
    while evaluations + 2 * batch <= budget or (budget - evaluations) >= 2:
        size = min(batch, (budget - evaluations) // 2)
        low_a = rng.uniform(0.0, 1.0 - 2.0 * sep, size=(size, 3))
        low_xi = rng.uniform(0.0, math.pi, size=size)
        lift = rng.uniform(sep, 0.35, size=(size, 3))
        high_a = np.minimum(low_a + lift, 1.0)
        high_xi = rng.uniform(0.0, math.pi, size=size)

        det_low = _det_from_arrays(low_a, low_xi)
        det_high = _det_from_arrays(high_a, high_xi)
        entropy_low = _entropy_quick(low_a, low_xi)
        entropy_high = _entropy_quick(high_a, high_xi)
        evaluations += 2 * size
        candidates += size

        feasible = (det_low >= 0.0) & (det_high >= 0.0)
        dominated = np.all(high_a - low_a >= sep, axis=1)
        margin = np.where(feasible & dominated, entropy_high - entropy_low, -np.inf)
        if margin.size:
            best_margin = max(best_margin, float(np.max(margin)))
        hits = np.flatnonzero(margin >= sep)
        for idx in hits:
            pair = _certificate(
                TripleInvariants(*low_a[idx], float(low_xi[idx])),
                TripleInvariants(*high_a[idx], float(high_xi[idx])),
                sep,
            )
            if pair is not None:
                return pair, SearchStats(evaluations, candidates, float(margin[idx]))
    return None, SearchStats(evaluations, candidates, best_margin)


def _det_from_arrays(a: np.ndarray, xi: np.ndarray) -> np.ndarray:
    return 1.0 - a.sum(axis=1) + 2.0 * np.sqrt(a.prod(axis=1)) * np.cos(xi)


def _search_grid(budget: int, sep: float) -> tuple[CounterexamplePair | None, SearchStats]:
    """Deterministic scan over the symmetric slice (equal overlaps, one phase)."""
    per_axis = max(2, int(math.isqrt(budget)))
    a_values = np.linspace(0.02, 0.95, per_axis)
    xi_values = np.linspace(0.0, math.pi, per_axis)
    grid_a, grid_xi = [arr.ravel() for arr in np.meshgrid(a_values, xi_values, indexing="ij")]
    stacked = np.repeat(grid_a[:, None], 3, axis=1)
    det = _det_from_arrays(stacked, grid_xi)
    entropy = _entropy_quick(stacked, grid_xi)
    evaluations = grid_a.size
    feasible = np.flatnonzero(det >= 0.0)

    candidates = 0
    best_margin = -math.inf
    for i in feasible:
        dominated = feasible[
            (grid_a[feasible] >= grid_a[i] + sep) & (entropy[feasible] >= entropy[i] + sep)
        ]
        candidates += feasible.size
        if dominated.size:
            j = int(dominated[0])
            best_margin = float(entropy[j] - entropy[i])
            pair = _certificate(
                TripleInvariants(grid_a[i], grid_a[i], grid_a[i], float(grid_xi[i])),
                TripleInvariants(grid_a[j], grid_a[j], grid_a[j], float(grid_xi[j])),
                sep,
            )
            if pair is not None:
                return pair, SearchStats(evaluations, candidates, best_margin)
    return None, SearchStats(evaluations, candidates, best_margin)


def _clip_invariants(vector: np.ndarray) -> TripleInvariants | None:
    a = vector[:3]
    xi = float(vector[3])
    if np.any(a < 0.0) or np.any(a > 1.0) or not 0.0 <= xi <= math.pi:
        return None
    candidate = TripleInvariants(float(a[0]), float(a[1]), float(a[2]), xi)
    return candidate if candidate.determinant() >= 0.0 else None


def _search_hillclimb(
    rng: np.random.Generator, budget: int, sep: float
) -> tuple[CounterexamplePair | None, SearchStats]:
    """Penalized ascent of the entropy gap over pairs of invariant tuples.

    Proposals are Gaussian in the 8 coordinates with step halving on
    rejection; infeasible proposals are rejected outright because the
    feasible region is non-convex near its boundary.
    """

    def objective(low: TripleInvariants, high: TripleInvariants) -> tuple[float, float]:
        gap = entropy_from_invariants(high) - entropy_from_invariants(low)
        packed_low = np.array([low.a12, low.a23, low.a31])
        packed_high = np.array([high.a12, high.a23, high.a31])
        shortfall = np.clip(sep - (packed_high - packed_low), 0.0, None).sum()
        return gap - 10.0 * shortfall, gap

    evaluations = 0
    candidates = 0
    best_margin = -math.inf
    while evaluations + 2 <= budget:
        low = random_feasible_invariants(rng)
        high = random_feasible_invariants(rng)
        evaluations += 2
        current, _ = objective(low, high)
        step = 0.15
        while step > 1e-4 and evaluations + 2 <= budget:
            packed = np.array(
                [low.a12, low.a23, low.a31, low.xi, high.a12, high.a23, high.a31, high.xi]
            )
            proposal = packed + rng.normal(0.0, step, size=8)
            new_low = _clip_invariants(proposal[:4])
            new_high = _clip_invariants(proposal[4:])
            if new_low is None or new_high is None:
                step *= 0.5
                continue
            evaluations += 2
            candidates += 1
            value, gap = objective(new_low, new_high)
            if value > current:
                low, high, current = new_low, new_high, value
                best_margin = max(best_margin, gap)
                pair = _certificate(low, high, sep)
                if pair is not None:
                    return pair, SearchStats(evaluations, candidates, gap)
            else:
                step *= 0.5
    return None, SearchStats(evaluations, candidates, best_margin)


def _search_two_state(
    rng: np.random.Generator, budget: int, sep: float
) -> tuple[None, SearchStats]:
    """Negative control: the two-state analogue admits no certificate.

    With a single overlap invariant the mixture entropy is strictly
    decreasing in it, so dominance and entropy growth are incompatible; the
    search still runs honestly and reports its statistics.
    """
    evaluations = 0
    candidates = 0
    best_margin = -math.inf
    while evaluations + 2 <= budget:
        low = float(rng.uniform(0.0, 1.0 - sep))
        high = float(rng.uniform(math.sqrt(min(1.0, low * low + sep)), 1.0))
        entropy_low = two_state_entropy(low)
        entropy_high = two_state_entropy(high)
        evaluations += 2
        candidates += 1
        margin = entropy_high - entropy_low
        best_margin = max(best_margin, margin)
        if margin >= sep:  # pragma: no cover - mathematically unreachable
            raise AssertionError("two-state entropy rose with the overlap")
    return None, SearchStats(evaluations, candidates, best_margin)


def overlap_dominance_counterexample(
    seed: int,
    budget: int,
    method: str = "random",
    num_states: int = 3,
    sep: float = EPS_SEPARATION,
) -> CounterexamplePair | NotFound:
    """Search for a pair of families with larger overlaps yet larger entropy.

    ``budget`` counts entropy evaluations. Every certificate is re-verified
    by :func:`verify_counterexample` before being returned; the result is
    deterministic in ``seed``. With ``num_states=2`` the search runs as a
    negative control and always returns :class:`NotFound`.
    """
    if budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    if method not in ("grid", "random", "hillclimb"):
        raise ValueError(f"unknown method {method!r}; expected grid, random or hillclimb")
    if num_states not in (2, 3):
        raise ValueError(f"num_states must be 2 or 3, got {num_states}")
    rng = np.random.default_rng(int(seed))
    if num_states == 2:
        pair, stats = _search_two_state(rng, budget, sep)
    elif method == "random":
        pair, stats = _search_random(rng, budget, sep)
    elif method == "grid":
        pair, stats = _search_grid(budget, sep)
    else:
        pair, stats = _search_hillclimb(rng, budget, sep)
    return pair if pair is not None else NotFound(stats)
