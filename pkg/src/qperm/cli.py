"""Command-line surface: file-driven checks and scans with reproducible output.

Exit codes follow one contract across subcommands so shell pipelines can
branch on them: 0 is an affirmative verdict (feasible, valid, found, or plain
success), 1 a negative verdict, 2 a usage, parse, or precondition error.
Seeds and tolerances are echoed into every artifact; fixed inputs, seed and
config produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import serialize
from .cloning import CloneInfeasibleError, cloning_feasible
from .compression import ensemble_entropy, rate_scan, rate_scan_csv, shannon_entropy
from .deleting import GramMismatchError, is_valid_deleter, recover_deleted
from .geometry import (
    NotFound,
    XiScanResult,
    feasible_xi_max,
    overlap_dominance_counterexample,
    xi_scan,
)
from .statekit import EPS_PSD, MIN_OVERLAP, OverlapError, StateVector
from .teleport import teleport

DEFAULT_SEED = 0
SEED_ENV_VAR = "QPERM_SEED"


@dataclass(frozen=True)
class RunConfig:
    """Tolerances, seed and output routing shared by all subcommands."""

    psd_tol: float
    min_overlap: float
    seed: int
    out: str | None
    fmt: str

    def __post_init__(self):
        if self.psd_tol <= 0.0 or self.min_overlap <= 0.0:
            raise ValueError("tolerances must be positive")

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "tolPsd": self.psd_tol,
            "minOverlap": self.min_overlap,
            "format": self.fmt,
        }


class UsageError(ValueError):
    """Bad arguments, unreadable input files, or violated preconditions."""


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise UsageError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"file {path} is not valid JSON: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit_json(payload: dict, config: RunConfig) -> None:
    payload = dict(payload)
    payload["config"] = config.echo()
    _emit(serialize.dumps(payload), config.out)


def _emit_csv(lines: str, config: RunConfig) -> None:
    echo = config.echo()
    header = "".join(f"# {key}={echo[key]}\n" for key in sorted(echo))
    _emit(header + lines, config.out)


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"could not parse {what} list {text!r}") from exc
    if not values:
        raise UsageError(f"{what} list is empty")
    return values


def _parse_ints(text: str, what: str) -> list[int]:
    return [int(v) for v in _parse_floats(text, what)]


_STATE_PRESETS = {
    "0": [1.0, 0.0],
    "1": [0.0, 1.0],
    "+": [math.sqrt(0.5), math.sqrt(0.5)],
    "-": [math.sqrt(0.5), -math.sqrt(0.5)],
    "i": [complex(math.sqrt(0.5)), complex(0.0, math.sqrt(0.5))],
}


def _parse_state(spec: str, seed: int) -> StateVector:
    if spec in _STATE_PRESETS:
        return StateVector(np.array(_STATE_PRESETS[spec], dtype=complex))
    if spec == "random":
        rng = np.random.default_rng(seed)
        raw = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        return StateVector.normalized(raw)
    parts = _parse_floats(spec, "state amplitude")
    if len(parts) != 4:
        raise UsageError(
            f"state spec {spec!r} not understood: use one of {sorted(_STATE_PRESETS)}, "
            "'random', or four comma-separated reals re0,im0,re1,im1"
        )
    try:
        return StateVector.normalized([complex(parts[0], parts[1]), complex(parts[2], parts[3])])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_clone_check(args, config: RunConfig) -> int:
    psi = serialize.state_set_from_dict(_read_json(args.states), f"state set {args.states}")
    ancilla = serialize.ancilla_from_dict(_read_json(args.ancilla), f"ancilla {args.ancilla}")
    report = cloning_feasible(
        psi, ancilla, copies=args.copies, min_overlap=config.min_overlap, psd_tol=config.psd_tol
    )
    payload = serialize.feasibility_report_to_dict(report)
    payload["copies"] = args.copies
    _emit_json(payload, config)
    return 0 if report.feasible else 1


def cmd_delete_verify(args, config: RunConfig) -> int:
    unitary = serialize.unitary_from_dict(_read_json(args.unitary), f"unitary {args.unitary}")
    psi = serialize.state_set_from_dict(_read_json(args.states), f"state set {args.states}")
    trace = is_valid_deleter(unitary, psi)
    payload = serialize.deletion_trace_to_dict(trace)
    if not trace.valid:
        payload["recovery"] = None
        _emit_json(payload, config)
        table = ", ".join(
            f"{label}: {fid:.6f}" for label, fid in zip(psi.labels, trace.residual_fidelities)
        )
        print(f"not a valid deleter; residual fidelities: {table}", file=sys.stderr)
        return 1
    recovery = recover_deleted(
        psi, trace.environment_states, min_overlap=config.min_overlap
    )
    recovery_payload = serialize.unitary_to_dict(recovery)
    payload["recovery"] = recovery_payload
    _emit_json(payload, config)
    if args.recovery_out is not None:
        recovery_payload = dict(recovery_payload)
        recovery_payload["config"] = config.echo()
        _emit(serialize.dumps(recovery_payload), args.recovery_out)
    return 0


def cmd_entropy(args, config: RunConfig) -> int:
    ensemble = serialize.ensemble_from_dict(_read_json(args.ensemble), f"ensemble {args.ensemble}")
    mixture_bits = ensemble_entropy(ensemble)
    label_bits = shannon_entropy(ensemble.probs)
    _emit_json({"entropyBits": mixture_bits, "shannonBits": label_bits}, config)
    return 0


def cmd_schumacher(args, config: RunConfig) -> int:
    n_list = _parse_ints(args.n, "block length")
    rate_list = _parse_floats(args.rates, "rate")
    if not 0.0 < abs(args.overlap) < 1.0:
        raise UsageError(f"overlap must lie strictly in (0, 1), got {args.overlap}")
    points = rate_scan(args.overlap, n_list, rate_list)
    if config.fmt == "csv":
        _emit_csv(rate_scan_csv(points), config)
    else:
        rows = [
            {
                "n": p.n,
                "rate": p.rate,
                "keptDim": p.kept_dim,
                "retainedWeight": p.retained_weight,
                "avgFidelityLB": p.avg_fidelity_lb,
            }
            for p in points
        ]
        _emit_json({"overlap": args.overlap, "points": rows}, config)
    return 0


def cmd_geometry_scan(args, config: RunConfig) -> int:
    try:
        feasible_xi_max(args.a12, args.a23, args.a31)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result: XiScanResult = xi_scan(args.a12, args.a23, args.a31, args.grid)
    if config.fmt == "csv":
        lines = "xi,cos_xi,S_bits\n" + "".join(
            f"{row.xi:.12g},{row.cos_xi:.12g},{row.entropy_bits:.12g}\n" for row in result.rows
        )
        _emit_csv(lines, config)
    else:
        _emit_json(
            {
                "rows": [
                    {"xi": row.xi, "cosXi": row.cos_xi, "entropyBits": row.entropy_bits}
                    for row in result.rows
                ],
                "monotone": result.monotone,
                "boundaryClipped": result.boundary_clipped,
            },
            config,
        )
    return 0


def cmd_counterexample(args, config: RunConfig) -> int:
    result = overlap_dominance_counterexample(
        seed=config.seed, budget=args.budget, method=args.method
    )
    if isinstance(result, NotFound):
        _emit_json(serialize.not_found_to_dict(result), config)
        return 1
    _emit_json(serialize.counterexample_to_dict(result), config)
    return 0


def cmd_teleport_demo(args, config: RunConfig) -> int:
    trace = teleport(_parse_state(args.state, config.seed))
    _emit_json(serialize.teleport_trace_to_dict(trace), config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qperm",
        description="Cloning/deleting feasibility, ensemble entropy, block "
        "compression and three-state geometry, from the command line.",
    )
    parser.add_argument("--tol-psd", type=float, default=EPS_PSD, help="relative PSD slack")
    parser.add_argument(
        "--min-overlap", type=float, default=MIN_OVERLAP, help="pairwise-overlap floor"
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"RNG seed; falls back to ${SEED_ENV_VAR}, then {DEFAULT_SEED}",
    )
    parser.add_argument("--out", default=None, help="artifact path (default: stdout)")
    parser.add_argument(
        "--format", choices=("json", "csv"), default=None, help="artifact format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    clone = sub.add_parser("clone-check", help="decide assisted-cloning feasibility")
    clone.add_argument("states", help="signal state-set JSON file")
    clone.add_argument("ancilla", help="ancilla JSON file (state set or densities)")
    clone.add_argument("--copies", type=int, default=1, help="copies already held")
    clone.set_defaults(func=cmd_clone_check, default_format="json")

    delete = sub.add_parser("delete-verify", help="validate a deleter and build the recovery")
    delete.add_argument("unitary", help="candidate deleter JSON file")
    delete.add_argument("states", help="signal state-set JSON file")
    delete.add_argument(
        "--recovery-out", default=None, help="also write the recovery unitary to this path"
    )
    delete.set_defaults(func=cmd_delete_verify, default_format="json")

    entropy = sub.add_parser("entropy", help="mixture and label entropies of an ensemble")
    entropy.add_argument("ensemble", help="ensemble JSON file (state set plus probs)")
    entropy.set_defaults(func=cmd_entropy, default_format="json")

    schumacher = sub.add_parser("schumacher", help="block-compression scan for a qubit pair")
    schumacher.add_argument("--overlap", type=float, required=True, help="pair overlap modulus")
    schumacher.add_argument("--n", required=True, help="comma-separated block lengths")
    schumacher.add_argument("--rates", required=True, help="comma-separated rates")
    schumacher.set_defaults(func=cmd_schumacher, default_format="csv")

    geo = sub.add_parser("geometry-scan", help="entropy along the feasible cycle-phase range")
    geo.add_argument("a12", type=float)
    geo.add_argument("a23", type=float)
    geo.add_argument("a31", type=float)
    geo.add_argument("--grid", type=int, default=101, help="number of grid points")
    geo.set_defaults(func=cmd_geometry_scan, default_format="csv")

    counter = sub.add_parser(
        "counterexample", help="search for overlap growth with entropy growth"
    )
    counter.add_argument("--budget", type=int, default=100_000, help="entropy evaluations")
    counter.add_argument(
        "--method", choices=("grid", "random", "hillclimb"), default="random"
    )
    counter.set_defaults(func=cmd_counterexample, default_format="json")

    tele = sub.add_parser("teleport-demo", help="print the exact teleportation trace")
    tele.add_argument(
        "--state", default="random", help="0, 1, +, -, i, 'random', or re0,im0,re1,im1"
    )
    tele.set_defaults(func=cmd_teleport_demo, default_format="json")
    return parser


def _resolve_seed(cli_seed: int | None) -> int:
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"${SEED_ENV_VAR}={env!r} is not an integer") from exc
    return DEFAULT_SEED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        fmt = args.format or args.default_format
        if fmt == "csv" and args.default_format == "json":
            raise UsageError(f"command '{args.command}' only emits JSON artifacts")
        config = RunConfig(
            psd_tol=args.tol_psd,
            min_overlap=args.min_overlap,
            seed=_resolve_seed(args.seed),
            out=args.out,
            fmt=fmt,
        )
        return args.func(args, config)
    except (UsageError, OverlapError, GramMismatchError, CloneInfeasibleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
