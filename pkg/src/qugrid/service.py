"""REST service: exercise delivery, grading, attempt log, heavy simulation.

One engine serves both deployments: the in-browser simulator handles
small circuits, and this service runs the same code path for circuits
past the client threshold, so results agree bit for bit. Exercises are
YAML files in a directory, reloaded when their mtime changes, which
keeps the authoring loop to "save file, refresh".

Auth is deliberately small: static bearer tokens mapped to a user id and
one of two roles. Students submit attempts; instructors can additionally
read any user's attempt history, counterexamples included. Answers
(model circuit, conditions, counterexamples) never appear in any
student-facing payload.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, Header, HTTPException, Query

from .circuit import circuit_to_obj, validate
from .engine import (
    InvalidInputError,
    probabilities,
    sample,
    simulate,
)
from .exercise import (
    Exercise,
    ExerciseError,
    circuit_from_obj,
    exercise_to_obj,
    parse_exercise,
)
from .gates import GateDefinitionError, default_registry
from .grading import (
    DimensionMismatchError,
    DisallowedGateError,
    grade,
    grade_result_to_obj,
)
from .storage import AttemptStore

DEFAULT_QUBIT_CAP = 20
DEFAULT_CLIENT_THRESHOLD = 14

_DEV_TOKENS = {
    "dev-student": ("student", "student"),
    "dev-instructor": ("instructor", "instructor"),
}


@dataclass
class ServiceConfig:
    exercise_dir: str
    db_path: str = ":memory:"
    qubit_cap: int = DEFAULT_QUBIT_CAP
    client_threshold: int = DEFAULT_CLIENT_THRESHOLD
    # token -> (user_id, role); role is "student" or "instructor".
    tokens: dict[str, tuple[str, str]] = field(default_factory=lambda: dict(_DEV_TOKENS))


class ExerciseRepository:
    """Exercise files in one directory; task id is the file name stem."""

    def __init__(self, directory: str):
        self.directory = directory
        self._cache: dict[str, tuple[float, Exercise]] = {}

    def _path(self, task_id: str) -> str:
        return os.path.join(self.directory, task_id + ".yaml")

    def task_ids(self) -> list[str]:
        try:
            names = os.listdir(self.directory)
        except FileNotFoundError:
            return []
        return sorted(name[: -len(".yaml")] for name in names if name.endswith(".yaml"))

    def get(self, task_id: str) -> Exercise | None:
        # Task ids come from URLs; never let them traverse out of the dir.
        if not task_id or "/" in task_id or os.sep in task_id or task_id.startswith("."):
            return None
        path = self._path(task_id)
        try:
            mtime = os.stat(path).st_mtime
        except OSError:
            self._cache.pop(task_id, None)
            return None
        cached = self._cache.get(task_id)
        if cached is not None and cached[0] == mtime:
            return cached[1]
        with open(path, encoding="utf-8") as handle:
            exercise = parse_exercise(handle.read())
        self._cache[task_id] = (mtime, exercise)
        return exercise


def _state_pairs(state) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in state.amplitudes]


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="qugrid", docs_url=None, redoc_url=None)
    repository = ExerciseRepository(config.exercise_dir)
    store = AttemptStore(config.db_path)
    app.state.store = store
    app.state.repository = repository
    app.state.config = config

    def identity(authorization: str | None) -> tuple[str, str]:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        token = authorization[len("Bearer ") :].strip()
        entry = config.tokens.get(token)
        if entry is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return entry

    def load_task(task_id: str) -> Exercise:
        try:
            exercise = repository.get(task_id)
        except ExerciseError as exc:
            raise HTTPException(status_code=500, detail=f"task file is broken: {exc}") from None
        if exercise is None:
            raise HTTPException(status_code=404, detail=f"no task {task_id!r}")
        return exercise

    def parse_wire_circuit(obj):
        try:
            return circuit_from_obj(obj, "circuit")
        except ExerciseError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.post("/api/simulate")
    def api_simulate(payload: dict = Body(...)):
        if "circuit" not in payload:
            raise HTTPException(status_code=400, detail="body needs a 'circuit' key")
        circuit, custom_gates = parse_wire_circuit(payload["circuit"])
        if circuit.n_qubits > config.qubit_cap:
            raise HTTPException(
                status_code=413,
                detail=f"{circuit.n_qubits} qubits exceeds the cap of {config.qubit_cap}",
            )
        try:
            registry = default_registry().with_gates(custom_gates)
        except GateDefinitionError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        violations = validate(circuit, registry)
        if violations:
            raise HTTPException(
                status_code=400, detail=[str(v) for v in violations]
            )
        input_bits = payload.get("input", "0" * circuit.n_qubits)
        if not isinstance(input_bits, str):
            raise HTTPException(status_code=422, detail="'input' must be a bitstring")
        options = payload.get("options") or {}
        if not isinstance(options, dict):
            raise HTTPException(status_code=422, detail="'options' must be an object")
        want = options.get("return", "distribution")
        if want not in ("distribution", "state", "both"):
            raise HTTPException(
                status_code=422, detail="options.return must be distribution, state or both"
            )
        try:
            state = simulate(circuit, input_bits, registry)
        except InvalidInputError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        response: dict = {"nQubits": circuit.n_qubits, "input": input_bits}
        dist = probabilities(state)
        if want in ("distribution", "both"):
            response["distribution"] = dist.to_dict()
        if want in ("state", "both"):
            response["state"] = _state_pairs(state)
        shots = options.get("shots")
        if shots is not None:
            if not isinstance(shots, int) or isinstance(shots, bool) or shots < 1:
                raise HTTPException(status_code=422, detail="options.shots must be an integer >= 1")
            seed = options.get("seed")
            if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
                raise HTTPException(status_code=422, detail="options.seed must be an integer")
            response["counts"] = sample(dist, shots, seed)
        return response

    @app.get("/api/tasks")
    def api_tasks():
        tasks = []
        for task_id in repository.task_ids():
            try:
                exercise = repository.get(task_id)
            except ExerciseError:
                continue  # broken file; keep the listing serving
            if exercise is not None:
                tasks.append({"taskId": task_id, "header": exercise.header})
        return {"tasks": tasks}

    @app.get("/api/tasks/{task_id}")
    def api_task(task_id: str):
        exercise = load_task(task_id)
        obj = exercise_to_obj(exercise)
        obj.pop("modelCircuit", None)
        obj.pop("modelConditions", None)
        return {"taskId": task_id, "exercise": obj}

    @app.get("/api/tasks/{task_id}/stats")
    def api_stats(task_id: str):
        load_task(task_id)
        stats = store.stats(task_id)
        return {
            "taskId": task_id,
            "attemptCount": stats.attempt_count,
            "averageAttemptsToCorrect": stats.average_attempts_to_correct,
        }

    @app.post("/api/tasks/{task_id}/attempts", status_code=201)
    def api_submit(
        task_id: str,
        payload: dict = Body(...),
        authorization: str | None = Header(default=None),
    ):
        user_id, _role = identity(authorization)
        exercise = load_task(task_id)
        if "circuit" not in payload:
            raise HTTPException(status_code=400, detail="body needs a 'circuit' key")
        circuit, custom_gates = parse_wire_circuit(payload["circuit"])
        try:
            registry = exercise.registry().with_gates(custom_gates)
        except GateDefinitionError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        try:
            result = grade(circuit, exercise, registry)
        except (DimensionMismatchError, DisallowedGateError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        stored = store.add(
            task_id=task_id,
            user_id=user_id,
            circuit=circuit_to_obj(circuit),
            result=grade_result_to_obj(result, include_counterexample=True),
            correct=result.correct,
        )
        return {
            "id": stored.id,
            "taskId": task_id,
            "userId": user_id,
            "submittedAt": stored.submitted_at,
            "result": grade_result_to_obj(result, include_counterexample=False),
        }

    @app.get("/api/tasks/{task_id}/attempts")
    def api_attempts(
        task_id: str,
        user: str | None = Query(default=None),
        authorization: str | None = Header(default=None),
    ):
        _user_id, role = identity(authorization)
        if role != "instructor":
            raise HTTPException(status_code=403, detail="instructor role required")
        load_task(task_id)
        attempts = store.for_task(task_id, user)
        return {
            "taskId": task_id,
            "attempts": [
                {
                    "id": a.id,
                    "userId": a.user_id,
                    "submittedAt": a.submitted_at,
                    "circuit": a.circuit,
                    "result": a.result,
                }
                for a in attempts
            ],
        }

    return app
