"""Acceptance suite: one test per release criterion, each at its stated tolerance.

The random-pair criteria share one module fixture that synthesizes and
simulates 200 seeded (theta, epsilon) draws with ancilla counts up to 12.
A summary hook in conftest.py prints one PASS/FAIL line per criterion.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from rzsynth import (
    RotationSpec,
    StateVector,
    SynthesisParams,
    apply_circuit,
    build_comparator,
    build_rotation_circuit,
    choose_parameters,
    conditional_operators,
    distance_bound,
    equal_up_to_global_phase,
    error_bound,
    is_exact,
    monte_carlo,
    oracle_ge_k,
    resources,
    rotation_matrix,
    success_probability,
    synthesize,
    trailing_zeros,
)
from rzsynth.verification import Z_MATRIX, expected_success_operator

SEED = 20260808
HALF_PI = math.pi / 2

T_GATE = SynthesisParams(n=8, k=181)


def sample_pairs() -> list[tuple[float, float]]:
    """200 seeded (theta, epsilon) pairs, epsilon spread so n covers 3..12."""
    rng = np.random.default_rng(SEED)
    pairs = [
        (float(rng.uniform(-HALF_PI, HALF_PI)), float(10 ** rng.uniform(-2.1, -0.4)))
        for _ in range(190)
    ]
    larger = [5e-3] * 4 + [2.5e-3] * 2 + [1.2e-3] * 2 + [6e-4] * 2  # n = 9..12
    pairs.extend((float(rng.uniform(-HALF_PI, HALF_PI)), eps) for eps in larger)
    return pairs


@pytest.fixture(scope="module")
def simulated_pairs():
    results = []
    for theta, epsilon in sample_pairs():
        params = choose_parameters(RotationSpec(theta=theta, epsilon=epsilon))
        assert params.n <= 12
        circuit = build_rotation_circuit(params)
        operators = conditional_operators(circuit)
        results.append((theta, epsilon, params, operators))
    return results


@pytest.mark.criterion(1, "T-gate synthesis regression: n=8, k=181, P=19193/32768, error 2.579e-4")
def test_criterion_1_t_gate_regression():
    params = choose_parameters(RotationSpec(theta=math.pi / 4, epsilon=1e-2))
    assert params.n == 8
    assert params.k == 181
    assert abs(success_probability(params) - 19193 / 32768) <= 1e-12
    assert abs(abs(math.pi / 4 - params.theta_star) - 2.579e-4) <= 1e-7


@pytest.mark.criterion(2, "two-control special case: cos=3/5, sin=4/5, probability 5/8")
def test_criterion_2_two_control_circuit():
    operators = conditional_operators(build_rotation_circuit(SynthesisParams(n=2, k=3)))
    zero = next(op for op in operators if op.outcome == "00")
    assert abs(zero.probability - 5 / 8) <= 1e-12
    unitary = zero.unitary
    phase_ratio = unitary[1, 1] / unitary[0, 0]
    assert abs(phase_ratio.real - 3 / 5) <= 1e-10
    assert abs(phase_ratio.imag - 4 / 5) <= 1e-10


@pytest.mark.criterion(3, "success branch applies exp(iv)*diag(1, e^(i theta*)) within epsilon, 200 pairs")
def test_criterion_3_success_operator(simulated_pairs):
    for theta, epsilon, params, operators in simulated_pairs:
        zeros = [op for op in operators if set(op.outcome) <= {"0"}]
        assert len(zeros) == 1
        expected = expected_success_operator(params)
        assert float(np.max(np.abs(zeros[0].unitary - expected))) <= 1e-10
        distance = distance_bound(theta, params.theta_star)
        spectral = float(
            np.linalg.norm(rotation_matrix(theta) - rotation_matrix(params.theta_star), 2)
        )
        assert abs(distance - spectral) <= 1e-12
        assert distance <= epsilon


@pytest.mark.criterion(4, "every failure branch is Z; total failure mass (1-tan^2)/2, 200 pairs")
def test_criterion_4_failure_branches(simulated_pairs):
    for _, _, params, operators in simulated_pairs:
        deterministic = params.is_identity or params.k in (0, 1 << params.n)
        failure_mass = 0.0
        for op in operators:
            if set(op.outcome) <= {"0"}:
                continue
            failure_mass += op.probability
            assert equal_up_to_global_phase(op.unitary, Z_MATRIX, 1e-10)
        expected_mass = 0.0 if deterministic else float((1 - params.tan_half_star**2) / 2)
        assert abs(failure_mass - expected_mass) <= 1e-10


@pytest.mark.criterion(5, "comparator == oracle >=k flip for all n in 2..6, all k, ancillas restored")
def test_criterion_5_comparator_oracle_equivalence():
    failures = 0
    for n in range(2, 7):
        for k in range(1, 2**n):
            t = trailing_zeros(k)
            # dropped low bits never affect the comparison
            assert all((y >= k) == ((y >> t) >= (k >> t)) for y in range(2**n))
            circuit = build_comparator(n, k)
            nc = circuit.registers.controls
            ni = circuit.registers.internal
            target = circuit.target_qubit
            for value in range(1 << nc):
                for bit in (0, 1):
                    index = value | (bit << target)
                    built = apply_circuit(
                        StateVector.basis(circuit.num_qubits, index), circuit
                    )
                    reference = oracle_ge_k(
                        StateVector.basis(circuit.num_qubits, index),
                        list(range(nc)),
                        k >> t,
                        target,
                    )
                    if not np.allclose(
                        built.amplitudes, reference.amplitudes, atol=1e-12
                    ):
                        failures += 1
                    if ni:
                        out = int(built.amplitudes.argmax())
                        if (out >> nc) & ((1 << ni) - 1):
                            failures += 1
    assert failures == 0


@pytest.mark.criterion(6, "toffoli = 2(n-1-tz(k)) <= 2*ceil(log2(1/eps)); depth = toffoli + 3")
def test_criterion_6_resource_bounds(simulated_pairs):
    cases = [(eps, params) for _, eps, params, _ in simulated_pairs]
    cases.append((1e-2, T_GATE))
    cases.append((0.5, SynthesisParams(n=2, k=3)))
    for epsilon, params in cases:
        report = resources(build_rotation_circuit(params))
        ceil_log = max(math.ceil(math.log2(1 / epsilon)), 0)
        if params.is_identity or params.k in (0, 1 << params.n):
            assert report.toffoli_count == 0
            continue
        expected = 2 * (params.n - 1 - trailing_zeros(params.k))
        assert report.toffoli_count == expected
        assert report.toffoli_count <= 2 * ceil_log
        assert report.gate_depth == report.toffoli_count + 3


@pytest.mark.criterion(7, "retry statistics: mean within 3 sigma, tails below 2^-m, cost bounds hold")
def test_criterion_7_retry_statistics():
    trials = 100_000
    report = monte_carlo(T_GATE, trials=trials, seed=SEED)
    p = Fraction(19193, 32768)
    q = 1 - p
    expected_mean = float(1 / p)
    sigma_mean = math.sqrt(float(q / (p * p)) / trials)
    assert abs(report.mean_repetitions - expected_mean) <= 3 * sigma_mean
    for m in range(1, 11):
        tail_p = float(q) ** m
        sigma_tail = math.sqrt(tail_p * (1 - tail_p) / trials)
        assert report.tail_counts[m] / trials <= 2.0**-m + 3 * sigma_tail
    assert report.mean_toffoli < 4 * math.ceil(math.log2(1 / 1e-2))
    assert report.mean_depth < 4 * math.ceil(math.log2(1 / 1e-2)) + 6
    assert report.check_failures == 0


@pytest.mark.criterion(8, "dyadic-tangent angles synthesize exactly; error bound monotone in n")
def test_criterion_8_exactness_and_monotonicity():
    rng = np.random.default_rng(SEED + 8)
    for _ in range(50):
        m = int(rng.integers(1, 11))
        j = int(rng.integers(-(2**m), 2**m + 1))
        theta = 2 * math.atan(j / 2**m)
        params = choose_parameters(RotationSpec(theta=theta, epsilon=2.0**-m))
        assert params.n == m + 1
        assert abs(params.theta_star - theta) <= 1e-12
        assert distance_bound(theta, params.theta_star) <= 1e-12
        assert is_exact(theta, params.n)
    bounds = [error_bound(n) for n in range(1, 63)]
    assert all(a > b for a, b in zip(bounds, bounds[1:]))


@pytest.mark.criterion(9, "sweep regression: factoring-scale accuracy 3.8e-10 lands on n = 33")
def test_criterion_9_sweep_regression():
    # 1e-4 of total budget spread over ~2.7e5 compiled gates is ~3.8e-10 each
    params = synthesize(math.pi / 4, 3.8e-10)
    assert params.n == 33
    again = synthesize(math.pi / 4, 1e-4 / 2.7e5)
    assert again.n == 33
    coarse = synthesize(math.pi / 4, 1e-2)
    assert (coarse.n, coarse.k) == (8, 181)
