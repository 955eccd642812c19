"""Command-line front end.

Subcommands: ``synth`` (compile parameters and report costs), ``emit``
(print the gate array), ``verify`` (simulate and check the conditional
operators), ``rus`` (Monte-Carlo the retry loop), and ``sweep`` (one synth
row per accuracy).  Every subcommand has a machine-readable JSON mode whose
schema the human-readable text mirrors.

Exit codes: 0 on success, 1 when verification fails, 2 for usage errors and
refused (over-cap or out-of-range) requests.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import re
import sys

from .circuit import Gate, Polarity, build_rotation_circuit, resources, trailing_zeros
from .errors import CapacityError, SimulationCapError
from .rus import DEFAULT_CHECKED_TRIALS, monte_carlo
from .serialize import export_circuit
from .simulator import DEFAULT_MAX_QUBITS
from .synthesis import (
    RotationSpec,
    SynthesisParams,
    choose_parameters,
    distance_bound,
    error_bound,
    expected_repetitions,
    is_exact,
    reduce_angle,
    success_probability_exact,
)
from .verification import verify_rotation_circuit

_PI_EXPR = re.compile(
    r"^([+-]?)(\d+(?:\.\d+)?)?\s*\*?\s*pi(?:\s*/\s*(\d+(?:\.\d+)?))?$", re.IGNORECASE
)
_RATIO_EXPR = re.compile(r"^([+-]?\d+(?:\.\d+)?)\s*/\s*(\d+(?:\.\d+)?)$")

_CLIFFORD_PREFIX = {-1: "SDG", 0: "I", 1: "S", 2: "Z"}


def parse_angle(text: str) -> float:
    """Angles as decimal radians, `pi` multiples (`pi/4`, `-3pi/8`, `3*pi/4`) or ratios."""
    expr = text.strip().lower()
    try:
        value = float(expr)
    except ValueError:
        pass
    else:
        if not math.isfinite(value):
            raise ValueError(f"angle must be finite, got {text!r}")
        return value
    m = _PI_EXPR.match(expr)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        coefficient = float(m.group(2)) if m.group(2) else 1.0
        denominator = float(m.group(3)) if m.group(3) else 1.0
        if denominator == 0:
            raise ValueError(f"zero denominator in angle {text!r}")
        return sign * coefficient * math.pi / denominator
    m = _RATIO_EXPR.match(expr)
    if m:
        denominator = float(m.group(2))
        if denominator == 0:
            raise ValueError(f"zero denominator in angle {text!r}")
        return float(m.group(1)) / denominator
    raise ValueError(f"cannot parse angle {text!r}; try 0.785, pi/4, or 3*pi/4")


def _synth_document(theta_raw: float, epsilon: float) -> dict:
    """The stable synth/sweep record for one (theta, epsilon) request."""
    reduced, power = reduce_angle(theta_raw)
    base = choose_parameters(RotationSpec(theta=reduced, epsilon=epsilon))
    params = SynthesisParams(n=base.n, k=base.k, clifford_power=power)
    circuit = build_rotation_circuit(params)
    report = resources(circuit)
    probability = success_probability_exact(params)
    tan_half = params.tan_half_star
    return {
        "theta": theta_raw,
        "theta_reduced": reduced,
        "clifford_power": power,
        "clifford_prefix": _CLIFFORD_PREFIX[power],
        "epsilon": epsilon,
        "n": params.n,
        "k": params.k,
        "k_binary": format(params.k, "b"),
        "trailing_zeros": trailing_zeros(params.k) if params.k else params.n,
        "theta_star": params.theta_star,
        "tan_half_star": f"{tan_half.numerator}/{tan_half.denominator}",
        "exact": is_exact(reduced, params.n),
        "angle_error": abs(reduced - params.theta_star),
        "operator_distance": distance_bound(reduced, params.theta_star),
        "error_bound": error_bound(params.n),
        "success_probability": float(probability),
        "success_probability_fraction": f"{probability.numerator}/{probability.denominator}",
        "expected_repetitions": expected_repetitions(params),
        "gate_count": len(circuit.gates),
        "resources": dataclasses.asdict(report),
    }


def _params_from_document(doc: dict) -> SynthesisParams:
    return SynthesisParams(n=doc["n"], k=doc["k"], clifford_power=doc["clifford_power"])


def _emit_json(doc: dict) -> int:
    print(json.dumps(doc, indent=2))
    return 0


def _print_synth_text(doc: dict) -> None:
    res = doc["resources"]
    lines = [
        f"theta            {doc['theta']!r}  (reduced {doc['theta_reduced']!r},"
        f" clifford prefix {doc['clifford_prefix']})",
        f"epsilon          {doc['epsilon']:g}",
        f"n                {doc['n']}",
        f"k                {doc['k']} = {doc['k_binary']}_2",
        f"theta_star       {doc['theta_star']!r}",
        f"tan(theta*/2)    {doc['tan_half_star']}"
        + ("  (exact synthesis)" if doc["exact"] else ""),
        f"angle error      {doc['angle_error']:.6e}  (bound {doc['error_bound']:g})",
        f"operator dist    {doc['operator_distance']:.6e}",
        f"probability      {doc['success_probability_fraction']}"
        f" = {doc['success_probability']:.6f}",
        f"expected reps    {doc['expected_repetitions']:.6f}",
        f"toffoli count    {res['toffoli_count']}",
        f"gate depth       {res['gate_depth']}",
        f"ancillas         {res['total_ancillas']}"
        f" ({res['control_ancillas']} control + {res['internal_ancillas']} internal)",
    ]
    print("\n".join(lines))


def _cmd_synth(args: argparse.Namespace) -> int:
    doc = _synth_document(args.theta, args.epsilon)
    if args.json:
        return _emit_json(doc)
    _print_synth_text(doc)
    return 0


def _cmd_emit(args: argparse.Namespace) -> int:
    doc = _synth_document(args.theta, args.epsilon)
    circuit = build_rotation_circuit(_params_from_document(doc))
    sys.stdout.write(export_circuit(circuit, fmt=args.format))
    return 0


def _flip_control_polarity(circuit, gate_index: int):
    """Test hook: rebuild the circuit with one control polarity inverted."""
    gates = list(circuit.gates)
    if not 0 <= gate_index < len(gates):
        raise ValueError(f"gate index {gate_index} out of range (0..{len(gates) - 1})")
    gate = gates[gate_index]
    if not gate.controls:
        raise ValueError(f"gate {gate_index} ({gate.kind.value}) has no controls to corrupt")
    (qubit, polarity), *rest = gate.controls
    flipped = Polarity.NEGATIVE if polarity is Polarity.POSITIVE else Polarity.POSITIVE
    gates[gate_index] = Gate(gate.kind, ((qubit, flipped), *rest), gate.target)
    return dataclasses.replace(circuit, gates=tuple(gates))


def _cmd_verify(args: argparse.Namespace) -> int:
    doc = _synth_document(args.theta, args.epsilon)
    params = _params_from_document(doc)
    circuit = build_rotation_circuit(params)
    if args.corrupt_polarity is not None:
        circuit = _flip_control_polarity(circuit, args.corrupt_polarity)
    report = verify_rotation_circuit(params, circuit, max_qubits=args.max_qubits)
    out = {
        "theta": args.theta,
        "epsilon": args.epsilon,
        "n": params.n,
        "k": params.k,
        "passed": report.passed,
        "outcomes": report.outcome_count,
        "success_probability": report.success_probability,
        "expected_probability": report.expected_probability,
        "expected_probability_fraction": doc["success_probability_fraction"],
        "failure_probability": report.failure_probability,
        "expected_failure_probability": report.expected_failure_probability,
        "failures": [
            {"outcome": f.outcome, "reason": f.reason} for f in report.failures
        ],
    }
    if args.json:
        _emit_json(out)
    else:
        status = "PASS" if report.passed else "FAIL"
        print(
            f"{status}: n={params.n} k={params.k}, {report.outcome_count} outcome(s), "
            f"P(success) = {report.success_probability:.12f}"
            f" (expected {doc['success_probability_fraction']})"
        )
        for failure in report.failures:
            print(f"  outcome {failure.outcome}: {failure.reason}")
    return 0 if report.passed else 1


def _cmd_rus(args: argparse.Namespace) -> int:
    doc = _synth_document(args.theta, args.epsilon)
    params = _params_from_document(doc)
    report = monte_carlo(
        params,
        trials=args.trials,
        seed=args.seed,
        checked_trials=min(args.checked, args.trials),
        max_qubits=args.max_qubits,
    )
    ceil_log = max(math.ceil(math.log2(1.0 / args.epsilon)), 0)
    toffoli_bound = 4 * ceil_log
    depth_bound = 4 * ceil_log + 6
    out = {
        "theta": args.theta,
        "epsilon": args.epsilon,
        "n": params.n,
        "k": params.k,
        "report": report.to_dict(),
        "bounds": {
            "expected_repetitions": report.expected_repetitions,
            "repetition_bound": 2.0,
            "toffoli_bound": toffoli_bound,
            "depth_bound": depth_bound,
            "mean_toffoli_below_bound": report.mean_toffoli < toffoli_bound,
            "mean_depth_below_bound": report.mean_depth < depth_bound,
        },
        "passed": report.check_failures == 0,
    }
    if args.json:
        _emit_json(out)
    else:
        print(
            f"trials {report.trials}  seed {report.seed}\n"
            f"mean repetitions {report.mean_repetitions:.6f}"
            f"  (theory {report.expected_repetitions:.6f}, bound 2)\n"
            f"mean toffoli     {report.mean_toffoli:.3f}  (bound {toffoli_bound})\n"
            f"mean depth       {report.mean_depth:.3f}  (bound {depth_bound})\n"
            f"tail counts      "
            + " ".join(f"X>{m}:{c}" for m, c in sorted(report.tail_counts.items()))
            + f"\noperator checks  {report.checked_trials - report.check_failures}"
            f"/{report.checked_trials} passed"
        )
    return 0 if report.check_failures == 0 else 1


def _cmd_sweep(args: argparse.Namespace) -> int:
    rows = [_synth_document(args.theta, eps) for eps in args.epsilons]
    if args.json:
        return _emit_json({"theta": args.theta, "rows": rows})
    header = (
        f"{'epsilon':>12}  {'n':>3}  {'k':>12}  {'toffoli':>7}  {'depth':>5}  "
        f"{'ancillas':>8}  {'probability':>12}  {'error':>12}"
    )
    print(header)
    for row in rows:
        res = row["resources"]
        print(
            f"{row['epsilon']:>12.3e}  {row['n']:>3}  {row['k']:>12}  "
            f"{res['toffoli_count']:>7}  {res['gate_depth']:>5}  "
            f"{res['total_ancillas']:>8}  {row['success_probability']:>12.6f}  "
            f"{row['angle_error']:>12.3e}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rzsynth",
        description="Compile single-qubit z-rotations into Clifford+Toffoli gate arrays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, epsilon: bool = True) -> None:
        p.add_argument("--theta", required=True, type=str, help="angle, e.g. pi/4 or 0.785")
        if epsilon:
            p.add_argument("--epsilon", required=True, type=float, help="accuracy bound")
        p.add_argument("--json", action="store_true", help="emit machine-readable JSON")

    p_synth = sub.add_parser("synth", help="choose parameters and report costs")
    add_common(p_synth)
    p_synth.set_defaults(func=_cmd_synth)

    p_emit = sub.add_parser("emit", help="print the compiled gate array")
    p_emit.add_argument("--theta", required=True, type=str)
    p_emit.add_argument("--epsilon", required=True, type=float)
    p_emit.add_argument("--format", choices=("text", "json"), default="text")
    p_emit.set_defaults(func=_cmd_emit)

    p_verify = sub.add_parser("verify", help="simulate and check the conditional operators")
    add_common(p_verify)
    p_verify.add_argument("--max-qubits", type=int, default=DEFAULT_MAX_QUBITS)
    p_verify.add_argument("--corrupt-polarity", type=int, default=None, help=argparse.SUPPRESS)
    p_verify.set_defaults(func=_cmd_verify)

    p_rus = sub.add_parser("rus", help="Monte-Carlo the repeat-until-success loop")
    add_common(p_rus)
    p_rus.add_argument("--trials", type=int, default=100_000)
    p_rus.add_argument("--seed", type=int, default=12345)
    p_rus.add_argument("--checked", type=int, default=DEFAULT_CHECKED_TRIALS,
                       help="trials replayed by full simulation with a final-state audit")
    p_rus.add_argument("--max-qubits", type=int, default=DEFAULT_MAX_QUBITS)
    p_rus.set_defaults(func=_cmd_rus)

    p_sweep = sub.add_parser("sweep", help="one synth row per accuracy")
    p_sweep.add_argument("--theta", required=True, type=str)
    p_sweep.add_argument("--epsilons", required=True, type=float, nargs="+")
    p_sweep.add_argument("--json", action="store_true")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "theta"):
        try:
            args.theta = parse_angle(args.theta)
        except ValueError as exc:
            parser.error(str(exc))
    if getattr(args, "epsilon", None) is not None and args.epsilon <= 0:
        parser.error(f"epsilon must be positive, got {args.epsilon}")
    if getattr(args, "epsilons", None) is not None and any(e <= 0 for e in args.epsilons):
        parser.error("every epsilon must be positive")
    try:
        return args.func(args)
    except (CapacityError, SimulationCapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
