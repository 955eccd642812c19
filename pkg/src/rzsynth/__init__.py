"""Compile single-qubit z-rotations into Clifford+Toffoli gate arrays.

The pipeline: :func:`synthesize` picks an ancilla count n and comparison
constant k whose induced angle is within epsilon of the request,
:func:`build_rotation_circuit` lays out the comparator-based gate array,
:func:`conditional_operators` / :func:`verify_rotation_circuit` check the
construction by simulation, and :func:`monte_carlo` exercises the
repeat-until-success protocol that turns the probabilistic circuit into a
deterministic rotation.
"""

from .circuit import (
    Circuit,
    Gate,
    GateKind,
    Polarity,
    Registers,
    ResourceReport,
    build_comparator,
    build_ge_k_test,
    build_rotation_circuit,
    circuit_depth,
    resources,
    trailing_zeros,
)
from .errors import CapacityError, ConstructionError, RunawayError, SimulationCapError
from .rus import MonteCarloReport, RunStats, monte_carlo, run_once, run_until_success
from .serialize import export_circuit, parse_circuit
from .simulator import (
    ConditionalOperator,
    StateVector,
    apply_circuit,
    apply_gate,
    conditional_operators,
    equal_up_to_global_phase,
    oracle_ge_k,
    rotation_matrix,
)
from .synthesis import (
    MAX_ANCILLAS,
    RotationSpec,
    SynthesisParams,
    choose_parameters,
    distance_bound,
    error_bound,
    expected_repetitions,
    global_phase,
    is_exact,
    reduce_angle,
    success_probability,
    success_probability_exact,
    synthesize,
    theta_star_of,
)
from .verification import VerificationReport, verify_rotation_circuit

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Circuit",
    "ConditionalOperator",
    "ConstructionError",
    "Gate",
    "GateKind",
    "MAX_ANCILLAS",
    "MonteCarloReport",
    "Polarity",
    "Registers",
    "ResourceReport",
    "RotationSpec",
    "RunStats",
    "RunawayError",
    "SimulationCapError",
    "StateVector",
    "SynthesisParams",
    "VerificationReport",
    "apply_circuit",
    "apply_gate",
    "build_comparator",
    "build_ge_k_test",
    "build_rotation_circuit",
    "choose_parameters",
    "circuit_depth",
    "conditional_operators",
    "distance_bound",
    "equal_up_to_global_phase",
    "error_bound",
    "expected_repetitions",
    "export_circuit",
    "global_phase",
    "is_exact",
    "monte_carlo",
    "oracle_ge_k",
    "parse_circuit",
    "reduce_angle",
    "resources",
    "rotation_matrix",
    "run_once",
    "run_until_success",
    "success_probability",
    "success_probability_exact",
    "synthesize",
    "theta_star_of",
    "trailing_zeros",
    "verify_rotation_circuit",
]
