"""Exercise configuration: parse, validate, and serialize task YAML.

The document carries the task prose, UI visibility switches, the grid
shape, the gate palette, the hidden model circuit with its gate-count
conditions, grading filters, the points rule, and feedback texts. Unknown
keys warn instead of failing so older servers tolerate newer documents.
A machine-readable JSON Schema for the format ships in ``schemas/``.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

import yaml

from .circuit import (
    Circuit,
    GatePlacement,
    QubitSpec,
    Violation,
    circuit_to_obj,
    placement_to_obj,
    qubit_to_obj,
    validate,
)
from .conditions import Condition, ConditionSyntaxError, parse_condition
from .engine import MANUAL, MATRIX, SamplingMode
from .gates import (
    ANTI_CONTROL,
    CONTROL,
    GateDefinition,
    GateDefinitionError,
    GateRegistry,
    default_registry,
    gate_from_obj,
    gate_to_obj,
)


class ExerciseError(ValueError):
    """Base for exercise-format failures."""


class MalformedYamlError(ExerciseError):
    pass


class SchemaViolationError(ExerciseError):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path or '<document>'}: {message}")


class InvalidModelCircuitError(ExerciseError):
    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        details = "; ".join(str(v) for v in self.violations)
        super().__init__(f"modelCircuit is not well-formed: {details}")


class ExerciseWarning(UserWarning):
    """Non-fatal findings while parsing (unknown keys, ignored values)."""


@dataclass(frozen=True)
class UiFlags:
    """Simulator widget visibility and labeling for one task."""

    qubit_notation: str = "bit"  # "bit" | "braket"
    show_chart: bool = True
    show_output_bits: bool = True
    show_shot_table: bool = False
    hide_zero_rows: bool = False
    left_axis_label: str = "In"
    middle_axis_label: str = "Step"
    right_axis_label: str = "Out"


@dataclass(frozen=True)
class FeedbackText:
    correct: str = "Correct."
    condition_wrong: str = "Incorrect: a required gate condition is not met."
    wrong: str = "Incorrect: the circuit's behaviour does not match the task."


@dataclass(frozen=True)
class Exercise:
    """One parsed task, immutable and safe to share."""

    n_qubits: int
    n_moments: int
    header: str = ""
    stem: str = ""
    ui: UiFlags = UiFlags()
    allowed_gates: tuple[str, ...] = ()
    sampling_mode: SamplingMode = MATRIX
    qubits: tuple[QubitSpec, ...] = ()
    initial_circuit: tuple[GatePlacement, ...] = ()
    model_circuit: tuple[GatePlacement, ...] = ()
    model_conditions: tuple[Condition, ...] = ()
    input_filters: tuple[str, ...] = ()
    multiplier: float = 1.0
    feedback: FeedbackText = FeedbackText()
    custom_gates: tuple[GateDefinition, ...] = ()

    def registry(self) -> GateRegistry:
        """Default gates extended with this task's custom gates."""
        return default_registry().with_gates(self.custom_gates)

    def model(self) -> Circuit:
        """The instructor's reference circuit on this task's grid."""
        return Circuit(
            n_qubits=self.n_qubits,
            n_moments=self.n_moments,
            placements=self.model_circuit,
            qubits=self.qubits,
        )

    def new_working_circuit(self) -> Circuit:
        """The grid a student starts from: pre-placed gates included."""
        return Circuit(
            n_qubits=self.n_qubits,
            n_moments=self.n_moments,
            placements=self.initial_circuit,
            qubits=self.qubits,
        )

    def input_bits(self) -> str:
        """Initial classical input read off the qubit specs, top wire first."""
        return "".join(str(q.value) for q in self.qubits)


_TOP_LEVEL_KEYS = {
    "header",
    "stem",
    "qubitNotation",
    "showChart",
    "showOutputBits",
    "showShotTable",
    "feedbackShowTable",
    "hideZeroRows",
    "leftAxisLabel",
    "middleAxisLabel",
    "rightAxisLabel",
    "nQubits",
    "nMoments",
    "gates",
    "samplingMode",
    "sampleSize",
    "qubits",
    "initialCircuit",
    "modelCircuit",
    "modelConditions",
    "inputFilters",
    "pointsRule",
    "feedbackText",
    "customGates",
}

_PLACEMENT_KEYS = {"name", "target", "time", "controls", "antiControls", "swapPartner", "editable"}
_QUBIT_KEYS = {"name", "value", "editable", "notation"}


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise SchemaViolationError(_join(path, key), "required key is missing")
    return data[key]


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaViolationError(path, f"expected an integer, got {value!r}")
    return value


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolationError(path, f"expected a number, got {value!r}")
    return float(value)


def _as_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaViolationError(path, f"expected a string, got {value!r}")
    return value


def _as_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaViolationError(path, f"expected a boolean, got {value!r}")
    return value


def _as_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaViolationError(path, f"expected a list, got {value!r}")
    return value


def _as_map(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaViolationError(path, f"expected a mapping, got {value!r}")
    return value


def _warn_unknown(data: dict, known: set[str], path: str) -> None:
    for key in data:
        if key not in known:
            warnings.warn(
                f"unknown key {_join(path, key)!r} ignored", ExerciseWarning, stacklevel=3
            )


def placement_from_obj(obj, path: str = "placement") -> GatePlacement:
    data = _as_map(obj, path)
    _warn_unknown(data, _PLACEMENT_KEYS, path)
    name = _as_str(_require(data, "name", path), _join(path, "name"))
    if not name:
        raise SchemaViolationError(_join(path, "name"), "gate name must be non-empty")
    target = _as_int(_require(data, "target", path), _join(path, "target"))
    time = _as_int(_require(data, "time", path), _join(path, "time"))
    controls = [
        _as_int(v, _join(_join(path, "controls"), i))
        for i, v in enumerate(_as_list(data.get("controls", []), _join(path, "controls")))
    ]
    anti_controls = [
        _as_int(v, _join(_join(path, "antiControls"), i))
        for i, v in enumerate(_as_list(data.get("antiControls", []), _join(path, "antiControls")))
    ]
    swap_partner = data.get("swapPartner")
    if swap_partner is not None:
        swap_partner = _as_int(swap_partner, _join(path, "swapPartner"))
    editable = _as_bool(data.get("editable", True), _join(path, "editable"))
    return GatePlacement(
        name=name,
        target=target,
        time=time,
        controls=frozenset(controls),
        anti_controls=frozenset(anti_controls),
        swap_partner=swap_partner,
        editable=editable,
    )


def qubit_from_obj(obj, path: str = "qubit") -> QubitSpec:
    data = _as_map(obj, path)
    _warn_unknown(data, _QUBIT_KEYS, path)
    value = _as_int(data.get("value", 0), _join(path, "value"))
    if value not in (0, 1):
        raise SchemaViolationError(_join(path, "value"), f"qubit value must be 0 or 1, got {value}")
    notation = data.get("notation")
    if notation is not None:
        notation = _as_str(notation, _join(path, "notation"))
        if notation not in ("bit", "braket"):
            raise SchemaViolationError(
                _join(path, "notation"), f"notation must be 'bit' or 'braket', got {notation!r}"
            )
    return QubitSpec(
        name=_as_str(data.get("name", ""), _join(path, "name")),
        value=value,
        editable=_as_bool(data.get("editable", True), _join(path, "editable")),
        notation=notation,
    )


def _placements_from_obj(obj, path: str) -> tuple[GatePlacement, ...]:
    return tuple(
        placement_from_obj(item, _join(path, i))
        for i, item in enumerate(_as_list(obj, path))
    )


def _custom_gates_from_obj(obj, path: str) -> tuple[GateDefinition, ...]:
    parsed = []
    for i, item in enumerate(_as_list(obj, path)):
        try:
            parsed.append(gate_from_obj(item))
        except GateDefinitionError as exc:
            raise SchemaViolationError(_join(path, i), str(exc)) from None
    return tuple(parsed)


def _sampling_mode_from_obj(data: dict) -> SamplingMode:
    kind = _as_str(data.get("samplingMode", "matrix"), "samplingMode")
    if kind not in ("matrix", "sample", "manual"):
        raise SchemaViolationError(
            "samplingMode", f"must be 'matrix', 'sample' or 'manual', got {kind!r}"
        )
    size = data.get("sampleSize")
    if kind == "sample":
        shots = _as_int(size, "sampleSize") if size is not None else 100
        if shots < 1:
            raise SchemaViolationError("sampleSize", f"must be >= 1, got {shots}")
        return SamplingMode("sample", shots)
    if size is not None:
        warnings.warn(
            "sampleSize is ignored unless samplingMode is 'sample'",
            ExerciseWarning,
            stacklevel=3,
        )
    return MATRIX if kind == "matrix" else MANUAL


def exercise_from_obj(data) -> Exercise:
    """Build a validated Exercise from a decoded YAML/JSON mapping."""
    data = _as_map(data, "")
    _warn_unknown(data, _TOP_LEVEL_KEYS, "")

    n_qubits = _as_int(_require(data, "nQubits", ""), "nQubits")
    n_moments = _as_int(_require(data, "nMoments", ""), "nMoments")
    if n_qubits < 1:
        raise SchemaViolationError("nQubits", f"must be >= 1, got {n_qubits}")
    if n_moments < 1:
        raise SchemaViolationError("nMoments", f"must be >= 1, got {n_moments}")

    # "feedbackShowTable" is the historical spelling of the shot-table
    # switch; accept it so existing documents parse warning-free.
    if "showShotTable" in data:
        show_shot_table = _as_bool(data["showShotTable"], "showShotTable")
    else:
        show_shot_table = _as_bool(data.get("feedbackShowTable", False), "feedbackShowTable")
    ui = UiFlags(
        qubit_notation=_as_str(data.get("qubitNotation", "bit"), "qubitNotation"),
        show_chart=_as_bool(data.get("showChart", True), "showChart"),
        show_output_bits=_as_bool(data.get("showOutputBits", True), "showOutputBits"),
        show_shot_table=show_shot_table,
        hide_zero_rows=_as_bool(data.get("hideZeroRows", False), "hideZeroRows"),
        left_axis_label=_as_str(data.get("leftAxisLabel", "In"), "leftAxisLabel"),
        middle_axis_label=_as_str(data.get("middleAxisLabel", "Step"), "middleAxisLabel"),
        right_axis_label=_as_str(data.get("rightAxisLabel", "Out"), "rightAxisLabel"),
    )
    if ui.qubit_notation not in ("bit", "braket"):
        raise SchemaViolationError(
            "qubitNotation", f"must be 'bit' or 'braket', got {ui.qubit_notation!r}"
        )

    custom_gates = _custom_gates_from_obj(data.get("customGates", []), "customGates")
    try:
        registry = default_registry().with_gates(custom_gates)
    except GateDefinitionError as exc:
        raise SchemaViolationError("customGates", str(exc)) from None

    if "gates" in data:
        allowed = tuple(
            _as_str(v, _join("gates", i)) for i, v in enumerate(_as_list(data["gates"], "gates"))
        )
        palette = set(registry.names) | {CONTROL, ANTI_CONTROL}
        for i, name in enumerate(allowed):
            if name not in palette:
                raise SchemaViolationError(
                    _join("gates", i), f"{name!r} is not an available gate or control dot"
                )
    else:
        allowed = registry.names + (CONTROL, ANTI_CONTROL)

    # Fewer entries than nQubits is fine: the rest take defaults. More is
    # a contradiction with the declared grid and rejected.
    if "qubits" in data:
        qubit_objs = _as_list(data["qubits"], "qubits")
        if len(qubit_objs) > n_qubits:
            raise SchemaViolationError(
                "qubits", f"{len(qubit_objs)} entries for {n_qubits} qubits"
            )
        qubits = tuple(
            qubit_from_obj(item, _join("qubits", i)) for i, item in enumerate(qubit_objs)
        ) + tuple(QubitSpec() for _ in range(n_qubits - len(qubit_objs)))
    else:
        qubits = tuple(QubitSpec() for _ in range(n_qubits))

    model_placements = _placements_from_obj(data.get("modelCircuit", []), "modelCircuit")
    model = Circuit(n_qubits, n_moments, model_placements, qubits)
    model_violations = validate(model, registry)
    if model_violations:
        raise InvalidModelCircuitError(model_violations)

    initial_placements = _placements_from_obj(data.get("initialCircuit", []), "initialCircuit")
    initial = Circuit(n_qubits, n_moments, initial_placements, qubits)
    initial_violations = validate(initial, registry)
    if initial_violations:
        raise SchemaViolationError(
            "initialCircuit", "; ".join(str(v) for v in initial_violations)
        )

    conditions = []
    for i, text in enumerate(_as_list(data.get("modelConditions", []), "modelConditions")):
        try:
            conditions.append(parse_condition(_as_str(text, _join("modelConditions", i))))
        except ConditionSyntaxError as exc:
            raise SchemaViolationError(_join("modelConditions", i), str(exc)) from None

    filters = []
    for i, pattern in enumerate(_as_list(data.get("inputFilters", []), "inputFilters")):
        pattern = _as_str(pattern, _join("inputFilters", i))
        try:
            re.compile(pattern)
        except re.error as exc:
            raise SchemaViolationError(_join("inputFilters", i), f"bad regex: {exc}") from None
        filters.append(pattern)

    multiplier = 1.0
    if "pointsRule" in data:
        rule = _as_map(data["pointsRule"], "pointsRule")
        _warn_unknown(rule, {"multiplier"}, "pointsRule")
        if "multiplier" in rule:
            multiplier = _as_number(rule["multiplier"], "pointsRule.multiplier")
            if multiplier < 0:
                raise SchemaViolationError(
                    "pointsRule.multiplier", f"must be >= 0, got {multiplier}"
                )

    feedback = FeedbackText()
    if "feedbackText" in data:
        texts = _as_map(data["feedbackText"], "feedbackText")
        _warn_unknown(texts, {"correct", "conditionWrong", "wrong"}, "feedbackText")
        feedback = FeedbackText(
            correct=_as_str(texts.get("correct", feedback.correct), "feedbackText.correct"),
            condition_wrong=_as_str(
                texts.get("conditionWrong", feedback.condition_wrong), "feedbackText.conditionWrong"
            ),
            wrong=_as_str(texts.get("wrong", feedback.wrong), "feedbackText.wrong"),
        )

    return Exercise(
        n_qubits=n_qubits,
        n_moments=n_moments,
        header=_as_str(data.get("header", ""), "header"),
        stem=_as_str(data.get("stem", ""), "stem"),
        ui=ui,
        allowed_gates=allowed,
        sampling_mode=_sampling_mode_from_obj(data),
        qubits=qubits,
        initial_circuit=initial_placements,
        model_circuit=model_placements,
        model_conditions=tuple(conditions),
        input_filters=tuple(filters),
        multiplier=multiplier,
        feedback=feedback,
        custom_gates=custom_gates,
    )


def parse_exercise(text: str) -> Exercise:
    """Parse an exercise document. Total: any input yields an Exercise or a
    structured ExerciseError, never a crash."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise MalformedYamlError(f"not valid YAML: {exc}") from None
    if data is None:
        data = {}
    return exercise_from_obj(data)


def exercise_to_obj(exercise: Exercise) -> dict:
    """Mapping form of an exercise; keys at their default value are omitted
    so documents stay as small as their author wrote them."""
    obj: dict = {}
    if exercise.header:
        obj["header"] = exercise.header
    if exercise.stem:
        obj["stem"] = exercise.stem
    defaults = UiFlags()
    ui_keys = [
        ("qubitNotation", "qubit_notation"),
        ("showChart", "show_chart"),
        ("showOutputBits", "show_output_bits"),
        ("showShotTable", "show_shot_table"),
        ("hideZeroRows", "hide_zero_rows"),
        ("leftAxisLabel", "left_axis_label"),
        ("middleAxisLabel", "middle_axis_label"),
        ("rightAxisLabel", "right_axis_label"),
    ]
    for yaml_key, attr in ui_keys:
        value = getattr(exercise.ui, attr)
        if value != getattr(defaults, attr):
            obj[yaml_key] = value
    obj["nQubits"] = exercise.n_qubits
    obj["nMoments"] = exercise.n_moments
    default_allowed = exercise.registry().names + (CONTROL, ANTI_CONTROL)
    if exercise.allowed_gates != default_allowed:
        obj["gates"] = list(exercise.allowed_gates)
    if exercise.sampling_mode.kind != "matrix":
        obj["samplingMode"] = exercise.sampling_mode.kind
        if exercise.sampling_mode.kind == "sample":
            obj["sampleSize"] = exercise.sampling_mode.shots
    if any(q != QubitSpec() for q in exercise.qubits):
        obj["qubits"] = [qubit_to_obj(q) for q in exercise.qubits]
    if exercise.initial_circuit:
        obj["initialCircuit"] = [placement_to_obj(p) for p in exercise.initial_circuit]
    if exercise.model_circuit:
        obj["modelCircuit"] = [placement_to_obj(p) for p in exercise.model_circuit]
    if exercise.model_conditions:
        obj["modelConditions"] = [str(c) for c in exercise.model_conditions]
    if exercise.input_filters:
        obj["inputFilters"] = list(exercise.input_filters)
    if exercise.multiplier != 1.0:
        obj["pointsRule"] = {"multiplier": exercise.multiplier}
    default_feedback = FeedbackText()
    texts = {}
    if exercise.feedback.correct != default_feedback.correct:
        texts["correct"] = exercise.feedback.correct
    if exercise.feedback.condition_wrong != default_feedback.condition_wrong:
        texts["conditionWrong"] = exercise.feedback.condition_wrong
    if exercise.feedback.wrong != default_feedback.wrong:
        texts["wrong"] = exercise.feedback.wrong
    if texts:
        obj["feedbackText"] = texts
    if exercise.custom_gates:
        obj["customGates"] = [gate_to_obj(g) for g in exercise.custom_gates]
    return obj


def serialize_exercise(exercise: Exercise) -> str:
    """YAML text such that ``parse_exercise(serialize_exercise(ex)) == ex``."""
    return yaml.safe_dump(exercise_to_obj(exercise), sort_keys=False, allow_unicode=True)


def circuit_from_obj(obj, path: str = "") -> tuple[Circuit, tuple[GateDefinition, ...]]:
    """Decode a standalone circuit document (file body or wire payload).

    Returns the circuit plus any custom gate definitions it carries;
    structural validation is the caller's step (``circuit.validate``).
    """
    data = _as_map(obj, path)
    _warn_unknown(data, {"nQubits", "nMoments", "qubits", "placements", "customGates"}, path)
    n_qubits = _as_int(_require(data, "nQubits", path), _join(path, "nQubits"))
    n_moments = _as_int(_require(data, "nMoments", path), _join(path, "nMoments"))
    if n_qubits < 1:
        raise SchemaViolationError(_join(path, "nQubits"), f"must be >= 1, got {n_qubits}")
    if n_moments < 1:
        raise SchemaViolationError(_join(path, "nMoments"), f"must be >= 1, got {n_moments}")
    qubits_path = _join(path, "qubits")
    if "qubits" in data:
        qubit_objs = _as_list(data["qubits"], qubits_path)
        if len(qubit_objs) > n_qubits:
            raise SchemaViolationError(
                qubits_path, f"{len(qubit_objs)} entries for {n_qubits} qubits"
            )
        qubits = tuple(
            qubit_from_obj(item, _join(qubits_path, i)) for i, item in enumerate(qubit_objs)
        ) + tuple(QubitSpec() for _ in range(n_qubits - len(qubit_objs)))
    else:
        qubits = tuple(QubitSpec() for _ in range(n_qubits))
    placements = _placements_from_obj(data.get("placements", []), _join(path, "placements"))
    custom_gates = _custom_gates_from_obj(data.get("customGates", []), _join(path, "customGates"))
    circuit = Circuit(n_qubits, n_moments, placements, qubits)
    return circuit, custom_gates


def parse_circuit_document(text: str) -> tuple[Circuit, tuple[GateDefinition, ...]]:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise MalformedYamlError(f"not valid YAML: {exc}") from None
    return circuit_from_obj(data)


def serialize_circuit(circuit: Circuit, custom_gates: tuple[GateDefinition, ...] = ()) -> str:
    obj = circuit_to_obj(circuit)
    if not any(q != QubitSpec() for q in circuit.qubits):
        obj.pop("qubits", None)
    if custom_gates:
        obj["customGates"] = [gate_to_obj(g) for g in custom_gates]
    return yaml.safe_dump(obj, sort_keys=False, allow_unicode=True)
