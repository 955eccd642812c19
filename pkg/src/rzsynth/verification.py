"""Checks that a built rotation circuit implements its contract.

The all-zero ancilla outcome must apply exp(i*v) * diag(1, e^(i*theta_star))
with v = arg(k + i*(2^n - k)) and probability (1 + tan^2(theta_star/2)) / 2;
every other outcome must apply Z with a global phase of -pi/4 or 3*pi/4, and
the failure outcomes must jointly carry probability (1 - tan^2) / 2.

Two compiled special cases deviate on purpose and are checked accordingly:
the identity path (theta_star == 0) is the empty circuit with probability 1,
and the k == 0 path emits S_dagger, which differs from the analytic operator
by a documented global phase of -i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, build_rotation_circuit
from .simulator import (
    DEFAULT_MAX_QUBITS,
    conditional_operators,
    equal_up_to_global_phase,
    rotation_matrix,
)
from .synthesis import (
    SynthesisParams,
    global_phase,
    success_probability,
    success_probability_exact,
)

#: Global phases the failure branch may carry: arg(1-i) and arg(i-1).
Z_BRANCH_PHASES = (-math.pi / 4.0, 3.0 * math.pi / 4.0)

Z_MATRIX = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


@dataclass(frozen=True)
class OutcomeFailure:
    outcome: str
    reason: str


@dataclass
class VerificationReport:
    """Result of simulating a rotation circuit against its contract."""

    params: SynthesisParams
    success_probability: float
    expected_probability: float
    failure_probability: float
    expected_failure_probability: float
    outcome_count: int
    failures: list[OutcomeFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def expected_success_operator(params: SynthesisParams) -> np.ndarray:
    """The absolute 2x2 operator the all-zero outcome must apply."""
    if params.is_identity:
        return np.eye(2, dtype=np.complex128)
    operator = cmath.exp(1j * global_phase(params)) * rotation_matrix(params.theta_star)
    if params.k == 0:
        # S_dagger stands in for X*S*X; they differ by this global phase.
        operator = -1j * operator
    return operator


def verify_rotation_circuit(
    params: SynthesisParams,
    circuit: Circuit | None = None,
    *,
    operator_tol: float = 1e-10,
    probability_tol: float = 1e-12,
    sum_tol: float = 1e-10,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> VerificationReport:
    """Simulate the circuit and check every conditional operator and probability.

    Returns a report listing each offending outcome; an empty list means the
    circuit passed.  ``circuit`` defaults to a fresh build from ``params``.
    """
    if circuit is None:
        circuit = build_rotation_circuit(params)
    operators = conditional_operators(circuit, max_qubits=max_qubits)
    deterministic = params.is_identity or params.k in (0, 1 << params.n)
    expected_p = 1.0 if deterministic else success_probability(params)
    expected_fail_mass = (
        0.0 if deterministic else float((1 - params.tan_half_star**2) / 2)
    )
    expected_zero_op = expected_success_operator(params)

    failures: list[OutcomeFailure] = []
    zero_p = 0.0
    fail_mass = 0.0
    zero_seen = False
    for op in operators:
        column_p = float(np.sum(np.abs(op.matrix[:, 1]) ** 2))
        if abs(column_p - op.probability) > sum_tol:
            failures.append(
                OutcomeFailure(
                    op.outcome,
                    f"input-dependent probability: {op.probability:.3e} vs {column_p:.3e}",
                )
            )
        if set(op.outcome) <= {"0"}:
            zero_seen = True
            zero_p = op.probability
            deviation = float(np.max(np.abs(op.unitary - expected_zero_op)))
            if deviation > operator_tol:
                failures.append(
                    OutcomeFailure(
                        op.outcome,
                        f"success operator deviates from exp(iv)*R(theta_star) by {deviation:.3e}",
                    )
                )
            if abs(op.probability - expected_p) > probability_tol:
                failures.append(
                    OutcomeFailure(
                        op.outcome,
                        f"success probability {op.probability!r} != expected {expected_p!r}",
                    )
                )
            continue
        fail_mass += op.probability
        try:
            is_z = equal_up_to_global_phase(op.unitary, Z_MATRIX, operator_tol)
        except ValueError:
            is_z = False
        if not is_z:
            failures.append(OutcomeFailure(op.outcome, "operator is not proportional to Z"))
            continue
        phase = cmath.phase(op.matrix[0, 0])
        if min(abs(phase - p) for p in Z_BRANCH_PHASES) > 1e-8:
            failures.append(
                OutcomeFailure(op.outcome, f"Z-branch phase {phase:.6f} not in (-pi/4, 3pi/4)")
            )
    if not zero_seen:
        failures.append(
            OutcomeFailure("0" * params.n, "all-zero outcome has vanishing probability")
        )
    if abs(fail_mass - expected_fail_mass) > sum_tol:
        failures.append(
            OutcomeFailure(
                "*",
                f"failure-branch probability {fail_mass:.12f} != expected {expected_fail_mass:.12f}",
            )
        )
    return VerificationReport(
        params=params,
        success_probability=zero_p,
        expected_probability=expected_p,
        failure_probability=fail_mass,
        expected_failure_probability=expected_fail_mass,
        outcome_count=len(operators),
        failures=failures,
    )


def theoretical_summary(params: SynthesisParams) -> dict:
    """Exact reference values for reports and the CLI."""
    prob = success_probability_exact(params)
    return {
        "success_probability": float(prob),
        "success_probability_fraction": f"{prob.numerator}/{prob.denominator}",
        "global_phase": global_phase(params),
        "theta_star": params.theta_star,
    }
