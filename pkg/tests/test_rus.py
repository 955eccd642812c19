"""Repeat-until-success protocol tests: sampling, statistics, determinism."""

import json
import math

import numpy as np
import pytest
import scipy.stats

from rzsynth import (
    RunawayError,
    StateVector,
    SynthesisParams,
    build_rotation_circuit,
    monte_carlo,
    resources,
    run_once,
    run_until_success,
    success_probability,
    synthesize,
)
from rzsynth.simulator import states_equal_up_to_phase

T_GATE = SynthesisParams(n=8, k=181)
TWO_CONTROL = SynthesisParams(n=2, k=3)
INV_SQRT2 = 1 / math.sqrt(2)


def geometric_tail_bins(tail_counts: dict[int, int], trials: int) -> list[int]:
    """Bin counts for X = 1..10 plus X > 10, reconstructed from tail counts."""
    tails = [trials] + [tail_counts[m] for m in range(1, 11)]
    return [tails[i] - tails[i + 1] for i in range(10)] + [tails[10]]


class TestRunOnce:
    def test_identity_path_is_a_noop(self):
        params = SynthesisParams(n=4, k=8)
        state = StateVector.plus()
        before = state.amplitudes.copy()
        outcome, after = run_once(params, state, np.random.default_rng(0))
        assert outcome == ""
        assert after is state
        assert np.array_equal(after.amplitudes, before)

    def test_certain_branch_applies_s(self):
        params = SynthesisParams(n=3, k=8)
        outcome, state = run_once(params, StateVector.plus(), np.random.default_rng(0))
        assert outcome == "000"
        assert np.allclose(state.amplitudes, [INV_SQRT2, 1j * INV_SQRT2])

    def test_success_state_and_frequency(self):
        rng = np.random.default_rng(414)
        expected = np.array([INV_SQRT2, (0.6 + 0.8j) * INV_SQRT2])
        successes = 0
        runs = 600
        for _ in range(runs):
            outcome, state = run_once(TWO_CONTROL, StateVector.plus(), rng)
            if outcome == "00":
                successes += 1
                assert states_equal_up_to_phase(state.amplitudes, expected, tol=1e-9)
            else:
                # the applied Z and the correcting Z cancel: back to |+> up to phase
                assert states_equal_up_to_phase(
                    state.amplitudes, np.array([INV_SQRT2, INV_SQRT2]), tol=1e-9
                )
        sigma = math.sqrt(0.625 * 0.375 / runs)
        assert abs(successes / runs - 0.625) < 3 * sigma

    def test_rejects_multi_qubit_state(self):
        with pytest.raises(ValueError):
            run_once(TWO_CONTROL, StateVector.zero(2), np.random.default_rng(0))


class TestRunUntilSuccess:
    def test_identity_path_never_loops(self):
        stats = run_until_success(
            SynthesisParams(n=4, k=8), StateVector.plus(), np.random.default_rng(1)
        )
        assert stats.repetitions == 0
        assert stats.total_toffoli == 0
        assert stats.final_operator_check

    def test_certain_branch_takes_one_attempt(self):
        stats = run_until_success(
            SynthesisParams(n=3, k=8), StateVector.plus(), np.random.default_rng(1)
        )
        assert stats.repetitions == 1
        assert stats.final_operator_check

    @pytest.mark.parametrize("seed", range(12))
    def test_t_gate_final_state_and_totals(self, seed):
        per_attempt = resources(build_rotation_circuit(T_GATE))
        stats = run_until_success(
            T_GATE, StateVector.plus(), np.random.default_rng(seed)
        )
        assert stats.repetitions >= 1
        assert stats.final_operator_check
        assert stats.total_toffoli == stats.repetitions * per_attempt.toffoli_count
        assert stats.total_depth == stats.repetitions * per_attempt.gate_depth

    def test_runaway_cap_raises(self):
        # default_rng(0).random() = 0.6369... >= 5/8, so the first attempt fails
        rng = np.random.default_rng(0)
        with pytest.raises(RunawayError):
            run_until_success(TWO_CONTROL, StateVector.plus(), rng, max_repetitions=1)

    def test_random_initial_states(self):
        rng = np.random.default_rng(77)
        for _ in range(5):
            raw = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            raw /= np.linalg.norm(raw)
            stats = run_until_success(T_GATE, StateVector(1, raw.copy()), rng)
            assert stats.final_operator_check


class TestMonteCarlo:
    def test_deterministic_given_seed(self):
        a = monte_carlo(TWO_CONTROL, trials=2000, seed=5, checked_trials=10)
        b = monte_carlo(TWO_CONTROL, trials=2000, seed=5, checked_trials=10)
        assert a == b
        c = monte_carlo(TWO_CONTROL, trials=2000, seed=6, checked_trials=10)
        assert c.mean_repetitions != a.mean_repetitions

    def test_identity_path_report(self):
        report = monte_carlo(SynthesisParams(n=4, k=8), trials=1000, seed=0)
        assert report.mean_repetitions == 0.0
        assert report.mean_toffoli == 0.0
        assert all(count == 0 for count in report.tail_counts.values())

    def test_two_control_mean(self):
        trials = 50_000
        report = monte_carlo(TWO_CONTROL, trials=trials, seed=2024, checked_trials=50)
        q = 1 - 0.625
        sigma = math.sqrt(q / 0.625**2 / trials)
        assert abs(report.mean_repetitions - 8 / 5) < 3 * sigma
        assert report.check_failures == 0
        assert report.mean_repetitions >= 1.0

    def test_probability_one_mean_is_exactly_one(self):
        report = monte_carlo(SynthesisParams(n=5, k=32), trials=500, seed=1)
        assert report.mean_repetitions == 1.0

    def test_report_serializes(self):
        report = monte_carlo(TWO_CONTROL, trials=100, seed=3, checked_trials=5)
        doc = json.loads(json.dumps(report.to_dict()))
        assert doc["trials"] == 100
        assert doc["seed"] == 3

    @pytest.mark.parametrize(
        "params,label",
        [(T_GATE, "t-gate"), (TWO_CONTROL, "two-control")],
        ids=["t-gate", "two-control"],
    )
    def test_chi_square_goodness_of_fit(self, params, label):
        trials = 100_000
        report = monte_carlo(params, trials=trials, seed=90210, checked_trials=50)
        p = success_probability(params)
        q = 1 - p
        observed = geometric_tail_bins(report.tail_counts, trials)
        expected = [trials * p * q ** (x - 1) for x in range(1, 11)] + [trials * q**10]
        result = scipy.stats.chisquare(observed, expected)
        assert result.pvalue > 0.001, (label, result)

    def test_tail_bound(self):
        trials = 100_000
        report = monte_carlo(T_GATE, trials=trials, seed=90210, checked_trials=50)
        q = 1 - success_probability(T_GATE)
        for m in range(1, 11):
            sigma = math.sqrt(q**m * (1 - q**m) / trials)
            assert report.tail_counts[m] / trials <= 2.0**-m + 3 * sigma

    def test_expected_cost_bounds(self):
        epsilon = 1e-2
        params = synthesize(math.pi / 4, epsilon)
        report = monte_carlo(params, trials=20_000, seed=11, checked_trials=20)
        ceil_log = math.ceil(math.log2(1 / epsilon))
        assert report.mean_toffoli < 4 * ceil_log
        assert report.mean_depth < 4 * ceil_log + 6

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            monte_carlo(TWO_CONTROL, trials=0, seed=0)
