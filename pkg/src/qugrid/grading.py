"""Automatic grading: probability equivalence against a model circuit.

A student circuit is correct when, for every admitted basis input, its
output probability vector matches the model's within tolerance. Phase
differences are invisible to this check on purpose: tasks compare what a
measurement could ever reveal, not amplitudes. Gate-count conditions run
first so palette-restriction tasks can reject an answer cheaply and with
targeted feedback.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .circuit import Circuit, validate
from .conditions import Condition
from .engine import Distribution, InvalidCircuitError, probabilities, simulate
from .exercise import Exercise
from .gates import ANTI_CONTROL, CONTROL, GateRegistry

GRADER_TOL = 1e-9


class GradingError(ValueError):
    """Base for grading failures that are errors, not wrong answers."""


class DimensionMismatchError(GradingError):
    pass


class DisallowedGateError(GradingError):
    pass


class InvalidFilterError(GradingError):
    pass


@dataclass(frozen=True)
class Counterexample:
    """One basis input on which the two circuits disagree."""

    input: str
    expected: Distribution
    actual: Distribution

    def max_deviation(self) -> float:
        diff = self.expected.probabilities - self.actual.probabilities
        return float(abs(diff).max())


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    inputs_checked: int
    counterexample: Counterexample | None = None


@dataclass(frozen=True)
class GradeResult:
    correct: bool
    points: float
    feedback: str
    failed_stage: str | None = None  # None | "condition" | "equivalence"
    failed_condition: Condition | None = None
    counterexample: Counterexample | None = None
    inputs_checked: int = 0


def admitted_inputs(n_qubits: int, filters: tuple[str, ...] = ()) -> list[str]:
    """Basis inputs the grader will check, in ascending binary order.

    Without filters this is all 2^n bitstrings. With filters, a bitstring
    is admitted when at least one pattern matches it completely (patterns
    are anchored: "1.." admits exactly the strings it spells out).
    """
    compiled = []
    for pattern in filters:
        try:
            compiled.append(re.compile(pattern))
        except re.error as exc:
            raise InvalidFilterError(f"bad input filter {pattern!r}: {exc}") from None
    all_inputs = [format(i, f"0{n_qubits}b") for i in range(2**n_qubits)]
    if not compiled:
        return all_inputs
    return [bits for bits in all_inputs if any(rx.fullmatch(bits) for rx in compiled)]


def equivalent(
    attempt: Circuit,
    model: Circuit,
    registry: GateRegistry,
    filters: tuple[str, ...] = (),
    tol: float = GRADER_TOL,
) -> EquivalenceReport:
    """Compare output distributions over every admitted basis input.

    Stops at the first disagreement and reports it. Both circuits must
    act on the same number of qubits.
    """
    if attempt.n_qubits != model.n_qubits:
        raise DimensionMismatchError(
            f"attempt has {attempt.n_qubits} qubits, model has {model.n_qubits}"
        )
    checked = 0
    for bits in admitted_inputs(model.n_qubits, filters):
        expected = probabilities(simulate(model, bits, registry))
        actual = probabilities(simulate(attempt, bits, registry))
        checked += 1
        diff = abs(expected.probabilities - actual.probabilities).max()
        if diff > tol:
            return EquivalenceReport(
                equivalent=False,
                inputs_checked=checked,
                counterexample=Counterexample(input=bits, expected=expected, actual=actual),
            )
    return EquivalenceReport(equivalent=True, inputs_checked=checked)


def check_conditions(
    circuit: Circuit, conditions: tuple[Condition, ...]
) -> Condition | None:
    """First condition the circuit fails, or None when all hold."""
    for condition in conditions:
        if not condition.evaluate(circuit):
            return condition
    return None


def _check_allowed(attempt: Circuit, exercise: Exercise) -> None:
    allowed = set(exercise.allowed_gates)
    fixture = set(exercise.initial_circuit)
    for placement in attempt.placements:
        if placement in fixture or not placement.editable:
            continue  # instructor-placed; the palette restricts students only
        if placement.name not in allowed:
            raise DisallowedGateError(f"gate {placement.name!r} is not allowed in this task")
        if placement.controls and CONTROL not in allowed:
            raise DisallowedGateError("control dots are not allowed in this task")
        if placement.anti_controls and ANTI_CONTROL not in allowed:
            raise DisallowedGateError("anti-control dots are not allowed in this task")


def grade(attempt: Circuit, exercise: Exercise, registry: GateRegistry | None = None) -> GradeResult:
    """Grade one submitted circuit against a task.

    Raises for malformed submissions (wrong qubit count, disallowed
    gates, structural violations); returns a result for well-formed ones.
    Conditions are checked before equivalence so their feedback wins.
    """
    if registry is None:
        registry = exercise.registry()
    if attempt.n_qubits != exercise.n_qubits:
        raise DimensionMismatchError(
            f"attempt has {attempt.n_qubits} qubits, task expects {exercise.n_qubits}"
        )
    if attempt.n_moments != exercise.n_moments:
        raise DimensionMismatchError(
            f"attempt has {attempt.n_moments} moments, task expects {exercise.n_moments}"
        )
    violations = validate(attempt, registry)
    if violations:
        raise InvalidCircuitError(violations)
    _check_allowed(attempt, exercise)

    failed = check_conditions(attempt, exercise.model_conditions)
    if failed is not None:
        return GradeResult(
            correct=False,
            points=0.0,
            feedback=exercise.feedback.condition_wrong,
            failed_stage="condition",
            failed_condition=failed,
        )

    report = equivalent(attempt, exercise.model(), registry, exercise.input_filters)
    if report.equivalent:
        return GradeResult(
            correct=True,
            points=exercise.multiplier,
            feedback=exercise.feedback.correct,
            inputs_checked=report.inputs_checked,
        )
    return GradeResult(
        correct=False,
        points=0.0,
        feedback=exercise.feedback.wrong,
        failed_stage="equivalence",
        counterexample=report.counterexample,
        inputs_checked=report.inputs_checked,
    )


def counterexample_to_obj(ce: Counterexample) -> dict:
    return {
        "input": ce.input,
        "expected": ce.expected.to_dict(),
        "actual": ce.actual.to_dict(),
    }


def grade_result_to_obj(result: GradeResult, include_counterexample: bool = True) -> dict:
    """Wire form of a grade. Counterexamples are withheld from students."""
    obj: dict = {
        "correct": result.correct,
        "points": result.points,
        "feedback": result.feedback,
    }
    if result.failed_stage is not None:
        obj["failedStage"] = result.failed_stage
    if result.failed_condition is not None:
        obj["failedCondition"] = str(result.failed_condition)
    if include_counterexample and result.counterexample is not None:
        obj["counterexample"] = counterexample_to_obj(result.counterexample)
    return obj
