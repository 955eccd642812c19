"""Stable text and JSON serializations of circuits.

Text format: a three-line register header, then one gate per line in list
order::

    controls 2
    internal 0
    target 1
    H q0
    H q1
    CCX q0 q1 q2
    S q2
    CCX q0 q1 q2
    H q0
    H q1

A ``!`` prefix marks a control that fires on |0>, e.g. ``CCX !q0 !q1 q2``.
The JSON format mirrors the Circuit dataclasses field for field and also
carries the synthesis metadata when present.  ``parse_circuit`` inverts both.
"""

from __future__ import annotations

import json
import re

from .circuit import Circuit, Gate, GateKind, Polarity, Registers
from .synthesis import SynthesisParams

_GATE_TOKEN = re.compile(r"^(!?)q(\d+)$")
_HEADER_FIELDS = ("controls", "internal", "target")


def export_circuit(circuit: Circuit, fmt: str = "text") -> str:
    """Serialize a circuit to the text or json format."""
    if fmt == "text":
        return _to_text(circuit)
    if fmt == "json":
        return json.dumps(_to_json_dict(circuit), indent=2) + "\n"
    raise ValueError(f"format must be 'text' or 'json', got {fmt!r}")


def parse_circuit(data: str) -> Circuit:
    """Parse either serialization format back into a Circuit.

    Text input cannot carry metadata, so circuits parsed from text always
    have ``metadata=None``.
    """
    stripped = data.lstrip()
    if stripped.startswith("{"):
        return _from_json_dict(json.loads(data))
    return _from_text(data)


def _gate_line(gate: Gate) -> str:
    parts = [gate.kind.value]
    for qubit, polarity in gate.controls:
        bang = "!" if polarity is Polarity.NEGATIVE else ""
        parts.append(f"{bang}q{qubit}")
    parts.append(f"q{gate.target}")
    return " ".join(parts)


def _to_text(circuit: Circuit) -> str:
    lines = [
        f"controls {circuit.registers.controls}",
        f"internal {circuit.registers.internal}",
        f"target {circuit.registers.target}",
    ]
    lines.extend(_gate_line(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def _from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValueError("circuit text must start with a controls/internal/target header")
    sizes = {}
    for expected, line in zip(_HEADER_FIELDS, lines[:3]):
        fields = line.split()
        if len(fields) != 2 or fields[0] != expected or not fields[1].isdigit():
            raise ValueError(f"bad header line {line!r}, expected '{expected} <count>'")
        sizes[expected] = int(fields[1])
    gates = [_parse_gate_line(line) for line in lines[3:]]
    return Circuit(registers=Registers(**sizes), gates=tuple(gates))


def _parse_gate_line(line: str) -> Gate:
    tokens = line.split()
    try:
        kind = GateKind(tokens[0])
    except ValueError:
        raise ValueError(f"unknown gate kind in line {line!r}") from None
    operands = []
    for token in tokens[1:]:
        m = _GATE_TOKEN.match(token)
        if m is None:
            raise ValueError(f"bad qubit token {token!r} in line {line!r}")
        negative = m.group(1) == "!"
        operands.append((int(m.group(2)), negative))
    if not operands:
        raise ValueError(f"gate line {line!r} has no target")
    *controls, (target, target_negated) = operands
    if target_negated:
        raise ValueError(f"target qubit cannot be negated in line {line!r}")
    return Gate(
        kind=kind,
        controls=tuple(
            (q, Polarity.NEGATIVE if neg else Polarity.POSITIVE) for q, neg in controls
        ),
        target=target,
    )


def _to_json_dict(circuit: Circuit) -> dict:
    meta = circuit.metadata
    return {
        "registers": {
            "controls": circuit.registers.controls,
            "internal": circuit.registers.internal,
            "target": circuit.registers.target,
        },
        "num_qubits": circuit.num_qubits,
        "gates": [
            {
                "kind": g.kind.value,
                "controls": [
                    {"qubit": q, "polarity": pol.value} for q, pol in g.controls
                ],
                "target": g.target,
            }
            for g in circuit.gates
        ],
        "metadata": None
        if meta is None
        else {
            "n": meta.n,
            "k": meta.k,
            "clifford_power": meta.clifford_power,
            "theta_star": meta.theta_star,
            "tan_half_star": str(meta.tan_half_star),
        },
    }


def _from_json_dict(doc: dict) -> Circuit:
    try:
        regs = Registers(
            controls=int(doc["registers"]["controls"]),
            internal=int(doc["registers"]["internal"]),
            target=int(doc["registers"]["target"]),
        )
        gates = tuple(
            Gate(
                kind=GateKind(g["kind"]),
                controls=tuple(
                    (int(c["qubit"]), Polarity(c["polarity"])) for c in g["controls"]
                ),
                target=int(g["target"]),
            )
            for g in doc["gates"]
        )
        raw_meta = doc.get("metadata")
        meta = (
            None
            if raw_meta is None
            else SynthesisParams(
                n=int(raw_meta["n"]),
                k=int(raw_meta["k"]),
                clifford_power=int(raw_meta.get("clifford_power", 0)),
            )
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed circuit document: {exc}") from exc
    return Circuit(registers=regs, gates=gates, metadata=meta)
