"""Interactive quantum circuit grid: simulate, grade, export, serve.

Circuits live on a grid of qubit rows and time-step columns. The engine
simulates them exactly on statevectors, the grader compares output
probability distributions against a hidden model circuit, the exporter
writes OpenQASM 2.0 or Qiskit source, and the service plus CLI drive the
same engine from HTTP and from files.
"""
from .circuit import (
    CellOccupiedError,
    Circuit,
    CircuitError,
    EmptyCellError,
    GatePlacement,
    OutOfBoundsError,
    QubitSpec,
    UnknownGateError,
    Violation,
    ViolationCode,
    circuit_to_obj,
    new_circuit,
    occupancy,
    place_gate,
    placement_to_obj,
    qubit_to_obj,
    remove_gate,
    validate,
)
from .conditions import Condition, ConditionSyntaxError, parse_condition
from .engine import (
    MANUAL,
    MATRIX,
    Distribution,
    InvalidCircuitError,
    InvalidInputError,
    SamplingMode,
    ShotRecord,
    SimulationError,
    StateVector,
    apply_placement,
    bits_to_index,
    empirical_distribution,
    index_to_bits,
    initial_state,
    measure_shot,
    probabilities,
    sample,
    simulate,
)
from .exercise import (
    Exercise,
    ExerciseError,
    ExerciseWarning,
    FeedbackText,
    InvalidModelCircuitError,
    MalformedYamlError,
    SchemaViolationError,
    UiFlags,
    circuit_from_obj,
    exercise_from_obj,
    exercise_to_obj,
    parse_circuit_document,
    parse_exercise,
    placement_from_obj,
    qubit_from_obj,
    serialize_circuit,
    serialize_exercise,
)
from .export import (
    OPENQASM_2,
    QISKIT,
    ExportError,
    UnsupportedGateInDialect,
    export_circuit,
    export_results,
)
from .gates import (
    ANTI_CONTROL,
    CONTROL,
    SWAP,
    GateDefinition,
    GateDefinitionError,
    GateRegistry,
    default_registry,
    gate_from_obj,
    gate_to_obj,
    unitarity_defect,
)
from .grading import (
    GRADER_TOL,
    Counterexample,
    DimensionMismatchError,
    DisallowedGateError,
    EquivalenceReport,
    GradeResult,
    GradingError,
    InvalidFilterError,
    admitted_inputs,
    check_conditions,
    counterexample_to_obj,
    equivalent,
    grade,
    grade_result_to_obj,
)
from .service import ExerciseRepository, ServiceConfig, create_app
from .storage import Attempt, AttemptStore, TaskStats

__version__ = "1.0.0"

__all__ = [
    "ANTI_CONTROL",
    "Attempt",
    "AttemptStore",
    "CONTROL",
    "CellOccupiedError",
    "Circuit",
    "CircuitError",
    "Condition",
    "ConditionSyntaxError",
    "Counterexample",
    "DimensionMismatchError",
    "DisallowedGateError",
    "Distribution",
    "EmptyCellError",
    "EquivalenceReport",
    "Exercise",
    "ExerciseError",
    "ExerciseRepository",
    "ExerciseWarning",
    "ExportError",
    "FeedbackText",
    "GRADER_TOL",
    "GateDefinition",
    "GateDefinitionError",
    "GatePlacement",
    "GateRegistry",
    "GradeResult",
    "GradingError",
    "InvalidCircuitError",
    "InvalidFilterError",
    "InvalidInputError",
    "InvalidModelCircuitError",
    "MANUAL",
    "MATRIX",
    "MalformedYamlError",
    "OPENQASM_2",
    "OutOfBoundsError",
    "QISKIT",
    "QubitSpec",
    "SWAP",
    "SamplingMode",
    "SchemaViolationError",
    "ServiceConfig",
    "ShotRecord",
    "SimulationError",
    "StateVector",
    "TaskStats",
    "UiFlags",
    "UnknownGateError",
    "UnsupportedGateInDialect",
    "Violation",
    "ViolationCode",
    "admitted_inputs",
    "apply_placement",
    "bits_to_index",
    "check_conditions",
    "circuit_from_obj",
    "circuit_to_obj",
    "counterexample_to_obj",
    "create_app",
    "default_registry",
    "empirical_distribution",
    "equivalent",
    "exercise_from_obj",
    "exercise_to_obj",
    "export_circuit",
    "export_results",
    "gate_from_obj",
    "gate_to_obj",
    "grade",
    "grade_result_to_obj",
    "index_to_bits",
    "initial_state",
    "measure_shot",
    "new_circuit",
    "occupancy",
    "parse_circuit_document",
    "parse_condition",
    "parse_exercise",
    "place_gate",
    "placement_from_obj",
    "placement_to_obj",
    "probabilities",
    "qubit_from_obj",
    "qubit_to_obj",
    "remove_gate",
    "sample",
    "serialize_circuit",
    "serialize_exercise",
    "simulate",
    "unitarity_defect",
    "validate",
]
