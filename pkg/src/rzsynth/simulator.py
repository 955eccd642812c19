"""Dense statevector simulation with polarity-aware controlled gates.

Qubit 0 is the least significant amplitude-index bit, matching the control
register encoding.  Gates mutate the amplitude buffer in place; X-like gates
are exact basis permutations, so comparator arithmetic carries no rounding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, Polarity
from .errors import ConstructionError, SimulationCapError

#: Refusal threshold for full-state simulation (2^26 amplitudes ~ 1 GiB).
DEFAULT_MAX_QUBITS = 26

OPERATOR_TOL = 1e-10

#: Outcomes lighter than this are floating-point dust, not real branches.
PROBABILITY_FLOOR = 1e-12

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_PHASE_FACTOR = {GateKind.S: 1j, GateKind.S_DAGGER: -1j, GateKind.Z: -1.0}


@dataclass(eq=False)
class StateVector:
    """Dense complex amplitudes over 2**num_qubits basis states."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        return cls.basis(num_qubits, 0)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def plus(cls) -> "StateVector":
        return cls(1, np.array([_INV_SQRT2, _INV_SQRT2], dtype=np.complex128))

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def check_qubit_cap(num_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> None:
    if num_qubits > max_qubits:
        raise SimulationCapError(
            f"{num_qubits} qubits exceeds the simulation cap of {max_qubits}; "
            "pass a larger max_qubits to override"
        )


def _view(amps: np.ndarray, n: int, fixed: Sequence[tuple[int, int]]) -> np.ndarray:
    """View of the amplitudes with the given qubits pinned to bit values.

    Pinned axes stay as singleton dimensions so the result is always a
    writable view, even with every qubit pinned.
    """
    idx: list = [slice(None)] * n
    for qubit, bit in fixed:
        idx[n - 1 - qubit] = slice(bit, bit + 1)
    return amps.reshape([2] * n)[tuple(idx)]


def _hadamard(amps: np.ndarray, qubit: int) -> None:
    v = amps.reshape(-1, 2, 1 << qubit)
    lo = v[:, 0, :]
    hi = v[:, 1, :]
    lo += hi
    hi *= -2.0
    hi += lo
    lo *= _INV_SQRT2
    hi *= _INV_SQRT2


def _controlled_flip(
    amps: np.ndarray, n: int, controls: Sequence[tuple[int, Polarity]], target: int
) -> None:
    fixed = [(q, 1 if pol is Polarity.POSITIVE else 0) for q, pol in controls]
    v0 = _view(amps, n, fixed + [(target, 0)])
    v1 = _view(amps, n, fixed + [(target, 1)])
    tmp = v0.copy()
    v0[...] = v1
    v1[...] = tmp


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate in place; negative-polarity controls fire on |0>."""
    n = state.num_qubits
    if max(gate.qubits) >= n:
        raise ValueError(f"gate {gate} out of range for {n} qubit(s)")
    amps = state.amplitudes
    kind = gate.kind
    if kind is GateKind.H:
        _hadamard(amps, gate.target)
    elif kind in _PHASE_FACTOR:
        upper = _view(amps, n, [(gate.target, 1)])
        upper *= _PHASE_FACTOR[kind]
    else:  # X, CX, CCX
        _controlled_flip(amps, n, gate.controls, gate.target)
    return state


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    for gate in circuit.gates:
        apply_gate(state, gate)
    return state


def oracle_ge_k(
    state: StateVector, control_register: Sequence[int], k: int, target: int
) -> StateVector:
    """Reference comparator: flip target on every basis state whose control value >= k.

    Implemented by direct index arithmetic, independent of the gate machinery,
    so it can referee the built comparator circuits.
    """
    nbits = len(control_register)
    if not 0 <= k <= (1 << nbits):
        raise ValueError(f"k must be in [0, 2^{nbits}], got {k}")
    n = state.num_qubits
    if target in control_register or max([target, *control_register]) >= n:
        raise ValueError("oracle register must be disjoint qubits within the state")
    amps = state.amplitudes
    idx = np.arange(amps.size, dtype=np.int64)
    value = np.zeros(amps.size, dtype=np.int64)
    for j, q in enumerate(control_register):
        value |= ((idx >> q) & 1) << j
    sub = np.nonzero((value >= k) & ((idx >> target) & 1 == 0))[0]
    other = sub | (1 << target)
    tmp = amps[sub].copy()
    amps[sub] = amps[other]
    amps[other] = tmp
    return state


@dataclass(frozen=True, eq=False)
class ConditionalOperator:
    """Unnormalized 2x2 map applied to the target for one measured outcome.

    ``outcome`` is the measured control bitstring, little-endian over the
    nominal ancilla count (bits dropped by comparator reduction read '0').
    ``probability`` is the squared norm of either column; the theory makes it
    input independent.
    """

    outcome: str
    matrix: np.ndarray
    probability: float

    @property
    def unitary(self) -> np.ndarray:
        """The matrix rescaled to unit columns."""
        return self.matrix / math.sqrt(self.probability)


def outcome_string(circuit: Circuit, measured: int) -> str:
    """Format a measured control-register value as a nominal-length bitstring.

    Little-endian: character j is bit j of the compared integer.  Bits below
    trailing_zeros(k) were dropped from the circuit and always read '0'.
    """
    nc = circuit.registers.controls
    nominal = circuit.metadata.n if circuit.metadata is not None else nc
    bits = "".join("1" if (measured >> j) & 1 else "0" for j in range(nc))
    return "0" * (nominal - nc) + bits


def _run_on_basis_targets(circuit: Circuit) -> list[np.ndarray]:
    """Simulate with target |0> then |1>; amplitudes reshaped (target_bit, rest)."""
    nq = circuit.num_qubits
    out = []
    for b in (0, 1):
        state = StateVector.basis(nq, b << circuit.target_qubit)
        apply_circuit(state, circuit)
        out.append(state.amplitudes.reshape(2, -1))
    return out


def conditional_operators(
    circuit: Circuit, max_qubits: int = DEFAULT_MAX_QUBITS
) -> list[ConditionalOperator]:
    """Split a rotation circuit into per-outcome conditional maps on the target.

    Simulates the circuit twice (target |0> and |1>, ancillas |0>) and groups
    amplitudes by measured ancilla outcome.  Raises ConstructionError if any
    internal carry ancilla fails to return to |0>; that self-check must never
    fire for circuits built by this package.
    """
    check_qubit_cap(circuit.num_qubits, max_qubits)
    nc = circuit.registers.controls
    ni = circuit.registers.internal
    runs = _run_on_basis_targets(circuit)
    if ni:
        # rest index = x + z * 2^nc with x the controls and z the carries
        leak = sum(
            float(np.sum(np.abs(r.reshape(2, 1 << ni, 1 << nc)[:, 1:, :]) ** 2))
            for r in runs
        )
        if leak > PROBABILITY_FLOOR:
            raise ConstructionError(
                f"internal ancillas not restored to |0> (stray probability {leak:.3e})"
            )
        runs = [r.reshape(2, 1 << ni, 1 << nc)[:, 0, :] for r in runs]
    col0, col1 = runs
    operators = []
    for measured in range(1 << nc):
        matrix = np.array(
            [
                [col0[0, measured], col1[0, measured]],
                [col0[1, measured], col1[1, measured]],
            ]
        )
        probability = float(np.sum(np.abs(matrix[:, 0]) ** 2))
        if max(probability, float(np.sum(np.abs(matrix[:, 1]) ** 2))) < PROBABILITY_FLOOR:
            continue
        operators.append(
            ConditionalOperator(
                outcome=outcome_string(circuit, measured),
                matrix=matrix,
                probability=probability,
            )
        )
    return operators


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = OPERATOR_TOL) -> bool:
    """True when a == lambda * b for some unit-modulus lambda, within tol in 2-norm.

    The phase is read off the entry where both matrices are largest.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    weight = np.abs(a) * np.abs(b)
    if not np.abs(a).any() or not np.abs(b).any():
        raise ValueError("cannot compare a zero matrix up to phase")
    pivot = np.unravel_index(int(np.argmax(weight)), a.shape)
    lam = a[pivot] / b[pivot] if b[pivot] != 0 else 0.0
    if lam == 0.0:
        return False
    lam /= abs(lam)
    return float(np.linalg.norm(a - lam * b, 2)) <= tol


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Phase-insensitive closeness of two state vectors.

    Compares the overlap deficit 1 - |<a|b>| / (|a| |b|) against tol; the
    deficit is the numerically stable metric near equality (the Euclidean
    phase-minimized distance bottoms out at sqrt(machine epsilon)).
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cannot compare a zero state up to phase")
    return 1.0 - abs(np.vdot(a, b)) / (na * nb) <= tol


def measure_low_qubits(
    state: StateVector, rng: np.random.Generator
) -> tuple[int, StateVector]:
    """Measure every qubit except the top one; collapse and return the remainder.

    Returns the sampled outcome index over the low qubits and the normalized
    single-qubit state left on the top qubit.
    """
    a = state.amplitudes.reshape(2, -1)
    probs = np.abs(a[0]) ** 2 + np.abs(a[1]) ** 2
    cumulative = np.cumsum(probs)
    draw = rng.random() * cumulative[-1]
    outcome = min(int(np.searchsorted(cumulative, draw, side="right")), probs.size - 1)
    vec = a[:, outcome].copy()
    vec /= np.linalg.norm(vec)
    return outcome, StateVector(1, vec)


def rotation_matrix(theta: float) -> np.ndarray:
    """diag(1, e^(i*theta)), the z-rotation this package compiles."""
    return np.array([[1.0, 0.0], [0.0, cmath.exp(1j * theta)]], dtype=np.complex128)
