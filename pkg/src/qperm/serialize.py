"""JSON wire formats. Complex numbers are two-element [re, im] arrays.

Schemas:

* state set:   ``{"dim": d, "states": [{"label": str, "amps": [[re, im], ...]}]}``
* ensemble:    state set plus ``"probs": [p, ...]``
* mixed set:   ``{"dim": d, "rhos": [{"label": str, "matrix": [[[re, im], ...], ...]}]}``
* unitary:     ``{"dim": d, "matrix": [[[re, im], ...], ...]}``

Decoders raise ``ValueError`` naming the offending field. ``dumps`` renders
with sorted keys and a fixed layout so equal payloads are equal bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .cloning import FeasibilityReport, MixedStateSet
from .compression import Ensemble
from .deleting import DeletionTrace
from .geometry import CounterexamplePair, NotFound
from .statekit import GramMatrix, StateSet, StateVector, UnitaryMap
from .teleport import TeleportTrace


def encode_complex(value: complex) -> list[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def encode_vector(vector: np.ndarray) -> list[list[float]]:
    return [encode_complex(v) for v in np.asarray(vector, dtype=complex)]


def encode_matrix(matrix: np.ndarray) -> list[list[list[float]]]:
    return [encode_vector(row) for row in np.asarray(matrix, dtype=complex)]


def _decode_pair(value, where: str) -> complex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValueError(f"field '{where}' must hold [re, im] pairs, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def decode_vector(values, where: str) -> np.ndarray:
    if not isinstance(values, list) or not values:
        raise ValueError(f"field '{where}' must be a non-empty list of [re, im] pairs")
    return np.array([_decode_pair(v, where) for v in values])


def decode_matrix(values, where: str) -> np.ndarray:
    if not isinstance(values, list) or not values:
        raise ValueError(f"field '{where}' must be a non-empty list of rows")
    return np.array([decode_vector(row, where) for row in values])


def _require(payload: dict, key: str, where: str):
    if key not in payload:
        raise ValueError(f"missing field '{key}' in {where}")
    return payload[key]


def state_set_to_dict(states: StateSet) -> dict:
    return {
        "dim": states.dim,
        "states": [
            {"label": label, "amps": encode_vector(state.amplitudes)}
            for label, state in zip(states.labels, states.states)
        ],
    }


def state_set_from_dict(payload: dict, where: str = "state set") -> StateSet:
    dim = int(_require(payload, "dim", where))
    entries = _require(payload, "states", where)
    if not isinstance(entries, list) or not entries:
        raise ValueError(f"field 'states' in {where} must be a non-empty list")
    states = []
    labels = []
    for position, entry in enumerate(entries):
        label = str(_require(entry, "label", f"{where}.states[{position}]"))
        amps = decode_vector(
            _require(entry, "amps", f"{where}.states[{position}]"),
            f"{where}.states[{position}].amps",
        )
        if amps.shape[0] != dim:
            raise ValueError(
                f"state '{label}' has {amps.shape[0]} amplitudes, expected dim {dim}"
            )
        states.append(StateVector(amps))
        labels.append(label)
    return StateSet(tuple(states), tuple(labels))


def ensemble_from_dict(payload: dict, where: str = "ensemble") -> Ensemble:
    states = state_set_from_dict(payload, where)
    probs = _require(payload, "probs", where)
    return Ensemble(states, np.asarray(probs, dtype=float))


def ensemble_to_dict(ensemble: Ensemble) -> dict:
    payload = state_set_to_dict(ensemble.states)
    payload["probs"] = [float(p) for p in ensemble.probs]
    return payload


def mixed_set_to_dict(mixed: MixedStateSet) -> dict:
    return {
        "dim": mixed.dim,
        "rhos": [
            {"label": label, "matrix": encode_matrix(rho)}
            for label, rho in zip(mixed.labels, mixed.rhos)
        ],
    }


def mixed_set_from_dict(payload: dict, where: str = "mixed set") -> MixedStateSet:
    dim = int(_require(payload, "dim", where))
    entries = _require(payload, "rhos", where)
    if not isinstance(entries, list) or not entries:
        raise ValueError(f"field 'rhos' in {where} must be a non-empty list")
    rhos = []
    labels = []
    for position, entry in enumerate(entries):
        label = str(_require(entry, "label", f"{where}.rhos[{position}]"))
        matrix = decode_matrix(
            _require(entry, "matrix", f"{where}.rhos[{position}]"),
            f"{where}.rhos[{position}].matrix",
        )
        if matrix.shape != (dim, dim):
            raise ValueError(f"density '{label}' has shape {matrix.shape}, expected ({dim}, {dim})")
        rhos.append(matrix)
        labels.append(label)
    return MixedStateSet(tuple(rhos), tuple(labels))


def ancilla_from_dict(payload: dict, where: str = "ancilla") -> MixedStateSet:
    """Accept either wire form for an ancilla family: pure states or densities."""
    if "rhos" in payload:
        return mixed_set_from_dict(payload, where)
    if "states" in payload:
        return MixedStateSet.from_pure(state_set_from_dict(payload, where))
    raise ValueError(f"missing field 'states' or 'rhos' in {where}")


def unitary_to_dict(unitary: UnitaryMap) -> dict:
    return {"dim": unitary.dim, "matrix": encode_matrix(unitary.matrix)}


def unitary_from_dict(payload: dict, where: str = "unitary") -> UnitaryMap:
    dim = int(_require(payload, "dim", where))
    matrix = decode_matrix(_require(payload, "matrix", where), f"{where}.matrix")
    if matrix.shape != (dim, dim):
        raise ValueError(f"unitary matrix has shape {matrix.shape}, expected ({dim}, {dim})")
    return UnitaryMap(matrix)


def feasibility_report_to_dict(report: FeasibilityReport) -> dict:
    return {
        "feasible": bool(report.feasible),
        "minEigenvalue": float(report.min_eigenvalue),
        "hMatrix": encode_matrix(report.h_matrix),
        "witnessGram": None
        if report.witness_gram is None
        else encode_matrix(report.witness_gram.entries),
    }


def deletion_trace_to_dict(trace: DeletionTrace) -> dict:
    return {
        "valid": bool(trace.valid),
        "environmentStates": state_set_to_dict(trace.environment_states),
        "residualFidelity": [float(f) for f in trace.residual_fidelities],
        "environmentPurity": [float(p) for p in trace.environment_purities],
    }


def teleport_trace_to_dict(trace: TeleportTrace) -> dict:
    return {
        "input": encode_vector(trace.input.amplitudes),
        "outcomeProbs": [float(p) for p in trace.outcome_probs],
        "correctedOutputs": [encode_vector(s.amplitudes) for s in trace.corrected_outputs],
        "fidelities": [float(f) for f in trace.fidelities],
    }


def gram_to_dict(gram_matrix: GramMatrix) -> list:
    return encode_matrix(gram_matrix.entries)


def counterexample_to_dict(pair: CounterexamplePair) -> dict:
    return {
        "found": True,
        "gramLow": gram_to_dict(pair.gram_low),
        "gramHigh": gram_to_dict(pair.gram_high),
        "entropyLow": float(pair.entropy_low),
        "entropyHigh": float(pair.entropy_high),
        "overlapDeltas": [float(d) for d in pair.overlap_deltas],
    }


def not_found_to_dict(result: NotFound) -> dict:
    margin = float(result.stats.best_entropy_margin)
    return {
        "found": False,
        "evaluations": int(result.stats.evaluations),
        "candidates": int(result.stats.candidates),
        "bestEntropyMargin": margin if math.isfinite(margin) else None,
    }


def dumps(payload: dict) -> str:
    """Canonical JSON rendering: sorted keys, two-space indent, newline-terminated."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
