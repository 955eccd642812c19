"""Gate-level construction of the >=k test and the probabilistic rotation circuit.

The comparator ripples a carry from the least significant bit of k upward,
with the carry-in pinned to the classical constant 1 (that constant is what
turns a strict > test into >=).  Three simplifications fall out:

* trailing zero bits of k keep the carry classically 1, contribute no gates,
  and their control qubits are dropped from the circuit entirely;
* the lowest set bit of k passes its control wire through as the carry;
* every later bit combines (control, carry) into a fresh carry ancilla with
  one Toffoli per bit: an AND where the bit of k is 1, an OR where it is 0.

The OR is a negative-control Toffoli whose target starts inverted; the X
that prepares the inversion rides along with ancilla preparation and the
pair counts as a single modified Toffoli.  The most significant bit writes
straight onto the rotation target (a bare CNOT when k is a power of two).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .synthesis import SynthesisParams


class Polarity(str, Enum):
    """Control sense: POSITIVE fires on |1>, NEGATIVE on |0>."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class GateKind(str, Enum):
    H = "H"
    S = "S"
    S_DAGGER = "SDG"
    X = "X"
    Z = "Z"
    CNOT = "CX"
    TOFFOLI = "CCX"


_CONTROL_COUNT = {
    GateKind.H: 0,
    GateKind.S: 0,
    GateKind.S_DAGGER: 0,
    GateKind.X: 0,
    GateKind.Z: 0,
    GateKind.CNOT: 1,
    GateKind.TOFFOLI: 2,
}


@dataclass(frozen=True)
class Gate:
    """One gate: a kind, zero or more (qubit, polarity) controls, and a target.

    Controls are stored sorted by qubit so structurally equal gates compare
    equal regardless of construction order.
    """

    kind: GateKind
    controls: tuple[tuple[int, Polarity], ...]
    target: int

    def __post_init__(self) -> None:
        expected = _CONTROL_COUNT[self.kind]
        if len(self.controls) != expected:
            raise ValueError(
                f"{self.kind.value} takes {expected} control(s), got {len(self.controls)}"
            )
        qubits = [q for q, _ in self.controls] + [self.target]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"qubit used twice in one gate: {qubits}")
        if min(qubits) < 0:
            raise ValueError(f"negative qubit id in gate: {qubits}")
        object.__setattr__(self, "controls", tuple(sorted(self.controls, key=lambda c: c[0])))

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls) + (self.target,)


def h(q: int) -> Gate:
    return Gate(GateKind.H, (), q)


def s(q: int) -> Gate:
    return Gate(GateKind.S, (), q)


def sdg(q: int) -> Gate:
    return Gate(GateKind.S_DAGGER, (), q)


def x(q: int) -> Gate:
    return Gate(GateKind.X, (), q)


def z(q: int) -> Gate:
    return Gate(GateKind.Z, (), q)


def cx(control: int, target: int, polarity: Polarity = Polarity.POSITIVE) -> Gate:
    return Gate(GateKind.CNOT, ((control, polarity),), target)


def ccx(c1: int, c2: int, target: int, polarity: Polarity = Polarity.POSITIVE) -> Gate:
    """Toffoli with both controls at the same polarity (all this library needs)."""
    return Gate(GateKind.TOFFOLI, ((c1, polarity), (c2, polarity)), target)


@dataclass(frozen=True)
class Registers:
    """Qubit layout: controls first (qubit 0 = least significant compared bit),
    then comparator-internal carry ancillas, then the rotation target."""

    controls: int
    internal: int
    target: int = 1

    def __post_init__(self) -> None:
        if self.controls < 0 or self.internal < 0 or self.target != 1:
            raise ValueError(f"invalid register sizes {self}")


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over the named register layout.

    ``metadata`` carries the synthesis parameters for circuits produced by
    :func:`build_rotation_circuit`; comparator fragments leave it None.
    Instances are immutable and safe to share between threads.
    """

    registers: Registers
    gates: tuple[Gate, ...]
    metadata: SynthesisParams | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        nq = self.num_qubits
        for g in self.gates:
            if max(g.qubits) >= nq:
                raise ValueError(f"gate {g} touches a qubit >= num_qubits={nq}")

    @property
    def num_qubits(self) -> int:
        return self.registers.controls + self.registers.internal + self.registers.target

    @property
    def control_qubits(self) -> range:
        return range(self.registers.controls)

    @property
    def internal_qubits(self) -> range:
        c = self.registers.controls
        return range(c, c + self.registers.internal)

    @property
    def target_qubit(self) -> int:
        return self.num_qubits - 1


@dataclass(frozen=True)
class ResourceReport:
    """Gate-array costs.  Modified Toffolis count as one Toffoli and one layer;
    their target-inverting X gates ride along with ancilla preparation."""

    toffoli_count: int
    gate_depth: int
    control_ancillas: int
    internal_ancillas: int
    total_ancillas: int


def trailing_zeros(k: int) -> int:
    """Index of the least significant set bit of a positive integer."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    return (k & -k).bit_length() - 1


def _comparator_parts(n: int, k: int) -> tuple[list[Gate], list[Gate], Registers]:
    """Carry-chain gates, target-flip gates, and the register layout for a >=k test.

    Wire j of the control register holds bit (t + j) of the compared value,
    t = trailing_zeros(k); lower bits cannot affect the comparison and are
    dropped.  The emitted test flips its target iff the retained bits read
    at least k >> t, which is equivalent to the full value reading >= k.
    """
    t = trailing_zeros(k)
    kk = k >> t
    nc = n - t
    internal = max(nc - 2, 0)
    regs = Registers(controls=nc, internal=internal)
    target = nc + internal
    if nc == 1:
        # k is a power of two: the comparison is just the top bit.
        return [], [cx(0, target)], regs
    carries: list[Gate] = []
    carry = 0  # the lowest set bit's wire doubles as the first carry
    for j in range(1, nc - 1):
        anc = nc + j - 1
        if (kk >> j) & 1:
            carries.append(ccx(j, carry, anc))
        else:
            carries.append(x(anc))
            carries.append(ccx(j, carry, anc, polarity=Polarity.NEGATIVE))
        carry = anc
    if (kk >> (nc - 1)) & 1:
        flips = [ccx(nc - 1, carry, target)]
    else:
        flips = [x(target), ccx(nc - 1, carry, target, polarity=Polarity.NEGATIVE)]
    return carries, flips, regs


def _check_comparator_args(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 < k < (1 << n):
        raise ValueError(
            f"k must satisfy 0 < k < 2^{n}, got {k}; k=0 and k=2^{n} are trivial "
            "and handled by build_rotation_circuit"
        )


def build_ge_k_test(n: int, k: int, direction: str) -> Circuit:
    """One half of the comparator pair used inside the rotation circuit.

    ``compute`` emits the carry chain then the target flip, leaving the
    internal carries dirty.  ``uncompute`` is the exact mirror: target flip
    first, then the carry chain undone in reverse on the same ancillas.
    Every gate involved is self-inverse, so the uncompute half is literally
    the reversed compute half.
    """
    if direction not in ("compute", "uncompute"):
        raise ValueError(f"direction must be 'compute' or 'uncompute', got {direction!r}")
    _check_comparator_args(n, k)
    carries, flips, regs = _comparator_parts(n, k)
    gates = carries + flips
    if direction == "uncompute":
        gates.reverse()
    return Circuit(registers=regs, gates=tuple(gates))


def build_comparator(n: int, k: int) -> Circuit:
    """A standalone clean >=k test: compute carries, flip the target, restore carries.

    Acts as "flip target iff value >= k" with every internal ancilla returned
    to |0>; this is the unitary the reference oracle is checked against.
    """
    _check_comparator_args(n, k)
    carries, flips, regs = _comparator_parts(n, k)
    return Circuit(registers=regs, gates=tuple(carries + flips + carries[::-1]))


def build_rotation_circuit(params: SynthesisParams) -> Circuit:
    """Assemble the probabilistic rotation circuit for compiled parameters.

    General case: an H column on the controls, the >=k compute half, S on the
    target, the >=k uncompute half, and a closing H column.  Special cases:
    theta_star == 0 compiles to the empty circuit (identity is applied
    directly, success probability 1), and k = 2^n or k = 0 compile to a bare
    S or S_dagger on the target, applied with certainty.  The S_dagger stands
    in for X*S*X, from which it differs by a global phase of -i.
    """
    n, k = params.n, params.k
    if params.is_identity:
        return Circuit(Registers(0, 0), (), metadata=params)
    if k == 1 << n:
        return Circuit(Registers(0, 0), (s(0),), metadata=params)
    if k == 0:
        return Circuit(Registers(0, 0), (sdg(0),), metadata=params)
    carries, flips, regs = _comparator_parts(n, k)
    half = carries + flips
    column = [h(q) for q in range(regs.controls)]
    target = regs.controls + regs.internal
    gates = column + half + [s(target)] + half[::-1] + column
    return Circuit(registers=regs, gates=tuple(gates), metadata=params)


def circuit_depth(circuit: Circuit) -> int:
    """Layered depth under data dependencies; every gate occupies one layer.

    Ancilla-preparing X gates schedule alongside the Hadamard columns or the
    neighbouring carry Toffolis, so a modified Toffoli costs one layer total.
    """
    frontier: dict[int, int] = {}
    depth = 0
    for g in circuit.gates:
        layer = 1 + max((frontier.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            frontier[q] = layer
        if layer > depth:
            depth = layer
    return depth


def resources(circuit: Circuit) -> ResourceReport:
    """Toffoli count, layered depth, and ancilla counts of a circuit.

    Comparator reduction is already reflected in the register sizes, so
    dropped control bits simply do not appear here; CNOT-degenerate target
    flips contribute zero Toffolis.
    """
    toffolis = sum(1 for g in circuit.gates if g.kind is GateKind.TOFFOLI)
    return ResourceReport(
        toffoli_count=toffolis,
        gate_depth=circuit_depth(circuit),
        control_ancillas=circuit.registers.controls,
        internal_ancillas=circuit.registers.internal,
        total_ancillas=circuit.registers.controls + circuit.registers.internal,
    )
