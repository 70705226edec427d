"""Command line driver: simulate, grade, export, serve.

Output is deterministic on purpose: bitstrings sort ascending, numbers
print with ten significant digits, and probabilities below 1e-12 print
as 0, so golden-file comparisons of MATRIX-mode runs are byte-stable.
"""
from __future__ import annotations

import sys

import click

from .circuit import CircuitError, validate
from .engine import (
    InvalidCircuitError,
    InvalidInputError,
    SimulationError,
    measure_shot,
    probabilities,
    sample,
    simulate,
)
from .exercise import ExerciseError, parse_circuit_document, parse_exercise
from .export import ExportError, export_circuit, export_results
from .gates import GateDefinitionError, default_registry
from .grading import GradingError, grade

_INPUT_ERRORS = (
    ExerciseError,
    CircuitError,
    SimulationError,
    GradingError,
    GateDefinitionError,
    ExportError,
)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_circuit(path: str):
    with open(path, encoding="utf-8") as handle:
        circuit, custom_gates = parse_circuit_document(handle.read())
    registry = default_registry().with_gates(custom_gates)
    violations = validate(circuit, registry)
    if violations:
        raise InvalidCircuitError(violations)
    return circuit, registry


def _format_probability(p: float) -> str:
    if p < 1e-12:
        return "0"
    return f"{p:.10g}"


@click.group()
def main() -> None:
    """Quantum circuit grid: simulate, grade, export and serve."""


@main.command(name="simulate")
@click.option("--circuit", "circuit_path", required=True, type=click.Path(exists=True))
@click.option("--input", "input_bits", default=None, help="Basis input, top wire first.")
@click.option("--shots", type=int, default=None, help="Sample this many shots instead.")
@click.option("--seed", type=int, default=None, help="Seed for --shots runs.")
def simulate_cmd(circuit_path: str, input_bits: str | None, shots: int | None, seed: int | None):
    """Print the output distribution, or sampled shots with --shots."""
    try:
        circuit, registry = _load_circuit(circuit_path)
        bits = input_bits if input_bits is not None else "0" * circuit.n_qubits
        state = simulate(circuit, bits, registry)
        dist = probabilities(state)
        if shots is None:
            for index, p in enumerate(dist.probabilities):
                bitstring = format(index, f"0{circuit.n_qubits}b")
                click.echo(f"{bitstring} {_format_probability(float(p))}")
        else:
            if shots < 1:
                _fail("--shots must be >= 1")
            import numpy as np

            rng = np.random.default_rng(seed)
            for i in range(1, shots + 1):
                record = measure_shot(dist, bits, rng, index=i)
                click.echo(f"{record.index}: {record.input} -> {record.output}")
    except _INPUT_ERRORS as exc:
        _fail(str(exc))


@main.command(name="grade")
@click.option("--exercise", "exercise_path", required=True, type=click.Path(exists=True))
@click.option("--attempt", "attempt_path", required=True, type=click.Path(exists=True))
def grade_cmd(exercise_path: str, attempt_path: str):
    """Grade a circuit file against a task; exit 0 only when correct."""
    try:
        with open(exercise_path, encoding="utf-8") as handle:
            exercise = parse_exercise(handle.read())
        with open(attempt_path, encoding="utf-8") as handle:
            attempt, custom_gates = parse_circuit_document(handle.read())
        registry = exercise.registry().with_gates(custom_gates)
        result = grade(attempt, exercise, registry)
    except _INPUT_ERRORS as exc:
        _fail(str(exc))
        return
    click.echo(f"correct: {'true' if result.correct else 'false'}")
    click.echo(f"points: {result.points!r}")
    click.echo(f"feedback: {result.feedback}")
    if result.failed_condition is not None:
        click.echo(f"failed condition: {result.failed_condition}")
    sys.exit(0 if result.correct else 1)


_FORMAT_ALIASES = {
    "qasm": "openqasm2",
    "openqasm2": "openqasm2",
    "qiskit": "qiskit",
    "csv": "csv",
    "json": "json",
}


@main.command(name="export")
@click.option("--circuit", "circuit_path", required=True, type=click.Path(exists=True))
@click.option(
    "--format",
    "fmt",
    required=True,
    type=click.Choice(sorted(_FORMAT_ALIASES)),
    help="qasm/openqasm2 and qiskit export the circuit; csv and json export results.",
)
@click.option("--input", "input_bits", default=None, help="Basis input for result formats.")
@click.option("--output", "output_path", default=None, type=click.Path())
def export_cmd(circuit_path: str, fmt: str, input_bits: str | None, output_path: str | None):
    """Write the circuit as source text, or its results as a table."""
    try:
        circuit, registry = _load_circuit(circuit_path)
        fmt = _FORMAT_ALIASES[fmt]
        if fmt in ("openqasm2", "qiskit"):
            text = export_circuit(circuit, registry, fmt)
        else:
            bits = input_bits if input_bits is not None else "0" * circuit.n_qubits
            state = simulate(circuit, bits, registry)
            text = export_results(state, probabilities(state), fmt)
    except _INPUT_ERRORS as exc:
        _fail(str(exc))
        return
    if output_path is None:
        click.echo(text, nl=False)
    else:
        with open(output_path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _parse_token(raw: str) -> tuple[str, tuple[str, str]]:
    parts = raw.split(":")
    if len(parts) != 3 or not all(parts):
        raise click.BadParameter(f"expected TOKEN:USER:ROLE, got {raw!r}")
    token, user, role = parts
    if role not in ("student", "instructor"):
        raise click.BadParameter(f"role must be student or instructor, got {role!r}")
    return token, (user, role)


@main.command(name="serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.option("--exercises", "exercise_dir", required=True, type=click.Path(exists=True))
@click.option("--db", "db_path", default=":memory:", help="sqlite file, or :memory:.")
@click.option("--qubit-cap", type=int, default=None, help="Largest circuit the server simulates.")
@click.option(
    "--token",
    "tokens",
    multiple=True,
    help="TOKEN:USER:ROLE, repeatable; defaults to dev-student/dev-instructor.",
)
def serve_cmd(host, port, exercise_dir, db_path, qubit_cap, tokens):
    """Run the REST service over a directory of exercise files."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(exercise_dir=exercise_dir, db_path=db_path)
    if qubit_cap is not None:
        config.qubit_cap = qubit_cap
    if tokens:
        config.tokens = dict(_parse_token(raw) for raw in tokens)
    uvicorn.run(create_app(config), host=host, port=port)


if __name__ == "__main__":
    main()
