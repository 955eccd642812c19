"""Repeat-until-success execution of the compiled rotation.

Each attempt prepares fresh |0> ancillas, runs the circuit, measures and
discards the ancillas, and applies a Z correction to the target whenever any
outcome bit was 1.  The attempt count is geometric with the per-attempt
success probability, so the loop finishes after fewer than two tries on
average.

Randomness policy: everything is driven by numpy's PCG64.  Trial i of a
Monte-Carlo run draws from ``default_rng((seed, i))``, i.e. a SeedSequence
over (seed, trial index), so trials are independent, reproducible across
platforms, and insensitive to execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, build_rotation_circuit, resources, z
from .errors import ConstructionError, RunawayError
from .simulator import (
    DEFAULT_MAX_QUBITS,
    StateVector,
    apply_circuit,
    apply_gate,
    check_qubit_cap,
    measure_low_qubits,
    outcome_string,
    rotation_matrix,
    states_equal_up_to_phase,
)
from .synthesis import SynthesisParams, expected_repetitions, success_probability

DEFAULT_MAX_REPETITIONS = 10**6
DEFAULT_CHECKED_TRIALS = 100
TAIL_DEPTH = 10


@dataclass(frozen=True)
class RunStats:
    """One full repeat-until-success run: attempts and accumulated gate costs."""

    repetitions: int
    total_toffoli: int
    total_depth: int
    final_operator_check: bool


@dataclass(frozen=True)
class MonteCarloReport:
    """Aggregate over independent repeat-until-success trials.

    ``tail_counts[m]`` counts trials whose attempt count exceeded m.  The
    first ``checked_trials`` trials replay the full circuit and verify the
    final state against the intended rotation; the rest sample the attempt
    count from the exact per-attempt success probability.
    """

    trials: int
    seed: int
    mean_repetitions: float
    mean_toffoli: float
    mean_depth: float
    expected_repetitions: float
    tail_counts: dict[int, int]
    checked_trials: int
    check_failures: int

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "mean_repetitions": self.mean_repetitions,
            "mean_toffoli": self.mean_toffoli,
            "mean_depth": self.mean_depth,
            "expected_repetitions": self.expected_repetitions,
            "tail_counts": {str(m): c for m, c in sorted(self.tail_counts.items())},
            "checked_trials": self.checked_trials,
            "check_failures": self.check_failures,
        }


def run_once(
    params: SynthesisParams,
    state: StateVector,
    rng: np.random.Generator,
    *,
    circuit: Circuit | None = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> tuple[str, StateVector]:
    """One attempt: fresh ancillas, full circuit, measure and discard, Z on failure.

    Returns the measured outcome (nominal-length bitstring; empty for the
    identity path, which never runs a circuit) and the post-attempt target
    state.
    """
    if state.num_qubits != 1:
        raise ValueError("run_once drives a single-qubit target state")
    if params.is_identity:
        return "", state
    if circuit is None:
        circuit = build_rotation_circuit(params)
    if circuit.registers.controls == 0:
        # Deterministic S / S_dagger path: no ancillas, nothing to measure.
        apply_gate(state, circuit.gates[0])
        return "0" * params.n, state
    check_qubit_cap(circuit.num_qubits, max_qubits)
    nq = circuit.num_qubits
    joint = StateVector.zero(nq)
    joint.amplitudes[0] = state.amplitudes[0]
    joint.amplitudes[1 << (nq - 1)] = state.amplitudes[1]
    apply_circuit(joint, circuit)
    measured, collapsed = measure_low_qubits(joint, rng)
    if measured >> circuit.registers.controls:
        raise ConstructionError(
            f"internal ancilla measured nonzero ({measured:b}); uncompute failed"
        )
    if measured:
        apply_gate(collapsed, z(0))
    return outcome_string(circuit, measured), collapsed


def run_until_success(
    params: SynthesisParams,
    state: StateVector,
    rng: np.random.Generator,
    *,
    max_repetitions: int = DEFAULT_MAX_REPETITIONS,
    check_tol: float = 1e-9,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> RunStats:
    """Repeat attempts until the all-zero outcome, then audit the final state.

    The final state must equal R(theta_star) applied to the initial state up
    to global phase; the result records whether that held.  Raises
    RunawayError after ``max_repetitions`` failures, which for a correct
    circuit has probability below 2^-max_repetitions.
    """
    initial = state.amplitudes.copy()
    if params.is_identity:
        return RunStats(0, 0, 0, final_operator_check=True)
    circuit = build_rotation_circuit(params)
    per_attempt = resources(circuit)
    repetitions = 0
    current = state
    while True:
        if repetitions >= max_repetitions:
            raise RunawayError(
                f"no all-zero outcome after {max_repetitions} attempts; "
                "this indicates a construction bug, not bad luck"
            )
        outcome, current = run_once(
            params, current, rng, circuit=circuit, max_qubits=max_qubits
        )
        repetitions += 1
        if set(outcome) <= {"0"}:
            break
    target = rotation_matrix(params.theta_star) @ initial
    ok = states_equal_up_to_phase(current.amplitudes, target, tol=check_tol)
    return RunStats(
        repetitions=repetitions,
        total_toffoli=repetitions * per_attempt.toffoli_count,
        total_depth=repetitions * per_attempt.gate_depth,
        final_operator_check=ok,
    )


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((seed, trial))


def monte_carlo(
    params: SynthesisParams,
    trials: int,
    seed: int,
    *,
    checked_trials: int = DEFAULT_CHECKED_TRIALS,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> MonteCarloReport:
    """Run ``trials`` independent repeat-until-success trials, deterministically.

    Attempt counts for unchecked trials come straight from Bernoulli draws at
    the exact success probability; probabilities are input independent, so
    this matches full simulation in distribution while staying fast.  The
    checked prefix replays the circuit end to end on a |+> target and
    verifies the final state.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if params.is_identity:
        return MonteCarloReport(
            trials=trials,
            seed=seed,
            mean_repetitions=0.0,
            mean_toffoli=0.0,
            mean_depth=0.0,
            expected_repetitions=0.0,
            tail_counts={m: 0 for m in range(1, TAIL_DEPTH + 1)},
            checked_trials=0,
            check_failures=0,
        )
    circuit = build_rotation_circuit(params)
    per_attempt = resources(circuit)
    p = success_probability(params)
    counts = np.empty(trials, dtype=np.int64)
    checked = 0
    failures = 0
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        if trial < checked_trials:
            stats = run_until_success(
                params, StateVector.plus(), rng, max_qubits=max_qubits
            )
            counts[trial] = stats.repetitions
            checked += 1
            failures += 0 if stats.final_operator_check else 1
        else:
            x = 1
            while rng.random() >= p:
                x += 1
            counts[trial] = x
    mean = float(counts.mean())
    return MonteCarloReport(
        trials=trials,
        seed=seed,
        mean_repetitions=mean,
        mean_toffoli=mean * per_attempt.toffoli_count,
        mean_depth=mean * per_attempt.gate_depth,
        expected_repetitions=expected_repetitions(params),
        tail_counts={m: int((counts > m).sum()) for m in range(1, TAIL_DEPTH + 1)},
        checked_trials=checked,
        check_failures=failures,
    )
