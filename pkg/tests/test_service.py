import os

import pytest
from fastapi.testclient import TestClient

from conftest import EXERCISES, listing1_model, read, three_cx_attempt, two_cx_attempt
from qugrid import (
    ExerciseRepository,
    ServiceConfig,
    circuit_to_obj,
    default_registry,
    probabilities,
    sample,
    simulate,
    create_app,
)

STUDENT = {"Authorization": "Bearer dev-student"}
INSTRUCTOR = {"Authorization": "Bearer dev-instructor"}

BELL = {
    "nQubits": 2,
    "nMoments": 2,
    "placements": [
        {"name": "H", "target": 0, "time": 0},
        {"name": "X", "target": 1, "time": 1, "controls": [0]},
    ],
}


@pytest.fixture
def client():
    app = create_app(ServiceConfig(exercise_dir=EXERCISES))
    with TestClient(app) as c:
        yield c


def post_simulate(client, circuit, **extra):
    return client.post("/api/simulate", json={"circuit": circuit, **extra})


def collect_keys(node, found):
    if isinstance(node, dict):
        for key, value in node.items():
            found.add(key)
            collect_keys(value, found)
    elif isinstance(node, list):
        for item in node:
            collect_keys(item, found)


def test_simulate_bell(client):
    resp = post_simulate(client, BELL)
    assert resp.status_code == 200
    body = resp.json()
    assert body["nQubits"] == 2
    assert body["input"] == "00"
    assert body["distribution"] == {"00": pytest.approx(0.5), "11": pytest.approx(0.5)}


def test_simulate_matches_local_engine_exactly(client, registry, bell_circuit):
    resp = post_simulate(client, BELL, input="10", options={"return": "both"})
    body = resp.json()
    state = simulate(bell_circuit, "10", registry)
    # JSON floats are repr-round-tripped, so equality here is bitwise
    assert body["distribution"] == probabilities(state).to_dict()
    assert body["state"] == [[a.real, a.imag] for a in state.amplitudes]


def test_simulate_counts_reproduce_sample(client, registry, bell_circuit):
    resp = post_simulate(client, BELL, options={"shots": 1000, "seed": 42})
    dist = probabilities(simulate(bell_circuit, "00", registry))
    assert resp.json()["counts"] == sample(dist, 1000, seed=42)
    assert resp.json()["counts"] == {"00": 503, "11": 497}


def test_simulate_state_only(client):
    resp = post_simulate(client, BELL, options={"return": "state"})
    body = resp.json()
    assert "distribution" not in body
    assert len(body["state"]) == 4


def test_simulate_qubit_cap(client):
    empty = {"nQubits": 25, "nMoments": 1, "placements": []}
    resp = post_simulate(client, empty)
    assert resp.status_code == 413
    assert "cap" in resp.json()["detail"]


def test_simulate_at_the_cap_still_runs(client):
    empty = {"nQubits": 20, "nMoments": 1, "placements": []}
    resp = post_simulate(client, empty)
    assert resp.status_code == 200
    assert resp.json()["distribution"] == {"0" * 20: 1.0}


def test_simulate_cap_is_configurable(tmp_path):
    app = create_app(ServiceConfig(exercise_dir=EXERCISES, qubit_cap=3))
    with TestClient(app) as client:
        resp = post_simulate(client, {"nQubits": 4, "nMoments": 1, "placements": []})
        assert resp.status_code == 413


def test_simulate_missing_circuit_key(client):
    resp = client.post("/api/simulate", json={"nQubits": 2})
    assert resp.status_code == 400
    assert "circuit" in resp.json()["detail"]


def test_simulate_malformed_placement(client):
    broken = {"nQubits": 2, "nMoments": 1, "placements": [{"target": 0, "time": 0}]}
    resp = post_simulate(client, broken)
    assert resp.status_code == 400
    assert "name" in resp.json()["detail"]


def test_simulate_reports_violations(client):
    overlapping = {
        "nQubits": 2,
        "nMoments": 1,
        "placements": [{"name": "X", "target": 0, "time": 0, "controls": [0]}],
    }
    resp = post_simulate(client, overlapping)
    assert resp.status_code == 400
    detail = resp.json()["detail"]
    assert isinstance(detail, list)
    assert any("ControlOverlapsTarget" in line for line in detail)


def test_simulate_rejects_bad_input(client):
    assert post_simulate(client, BELL, input=7).status_code == 422
    assert post_simulate(client, BELL, input="0").status_code == 422
    assert post_simulate(client, BELL, input="02").status_code == 422


def test_simulate_rejects_bad_options(client):
    assert post_simulate(client, BELL, options={"return": "amplitudes"}).status_code == 422
    assert post_simulate(client, BELL, options={"shots": 0}).status_code == 422
    assert post_simulate(client, BELL, options={"shots": True}).status_code == 422
    assert post_simulate(client, BELL, options={"shots": 10, "seed": "x"}).status_code == 422
    assert post_simulate(client, BELL, options=[1]).status_code == 422


def test_simulate_rejects_custom_gate_shadowing(client):
    payload = dict(
        BELL,
        customGates=[{"name": "X", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}],
    )
    resp = post_simulate(client, payload)
    assert resp.status_code == 400
    assert "duplicate" in resp.json()["detail"]


def test_task_listing(client):
    resp = client.get("/api/tasks")
    assert resp.status_code == 200
    tasks = resp.json()["tasks"]
    ids = [t["taskId"] for t in tasks]
    assert ids == sorted(ids)
    assert "copy_bits" in ids
    by_id = {t["taskId"]: t for t in tasks}
    assert by_id["copy_bits"]["header"] == "Tehtävä"


def test_task_detail_is_redacted(client):
    resp = client.get("/api/tasks/copy_bits")
    assert resp.status_code == 200
    body = resp.json()
    assert body["taskId"] == "copy_bits"
    exercise = body["exercise"]
    assert exercise["nQubits"] == 3
    assert exercise["gates"] == ["X", "control"]
    keys = set()
    collect_keys(body, keys)
    assert "modelCircuit" not in keys
    assert "modelConditions" not in keys


def test_unknown_task_is_404(client):
    assert client.get("/api/tasks/nope").status_code == 404
    assert client.get("/api/tasks/.hidden").status_code == 404


def test_repository_refuses_path_traversal(tmp_path):
    repo = ExerciseRepository(str(tmp_path))
    for candidate in ("", ".", "..", "../copy_bits", "a/b", ".hidden"):
        assert repo.get(candidate) is None


def test_repository_hot_reloads_on_mtime_change(tmp_path):
    path = os.path.join(tmp_path, "live.yaml")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("header: first\nnQubits: 1\nnMoments: 1\n")
    repo = ExerciseRepository(str(tmp_path))
    assert repo.get("live").header == "first"
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("header: second\nnQubits: 1\nnMoments: 1\n")
    os.utime(path, (0, os.stat(path).st_mtime + 5))
    assert repo.get("live").header == "second"


def test_service_serves_edited_file(tmp_path):
    path = os.path.join(tmp_path, "live.yaml")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("header: first\nnQubits: 1\nnMoments: 1\n")
    app = create_app(ServiceConfig(exercise_dir=str(tmp_path)))
    with TestClient(app) as client:
        assert client.get("/api/tasks/live").json()["exercise"]["header"] == "first"
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("header: second\nnQubits: 1\nnMoments: 1\n")
        os.utime(path, (0, os.stat(path).st_mtime + 5))
        assert client.get("/api/tasks/live").json()["exercise"]["header"] == "second"


def test_broken_task_file(tmp_path):
    with open(os.path.join(tmp_path, "bad.yaml"), "w", encoding="utf-8") as handle:
        handle.write("nQubits: [unclosed\n")
    with open(os.path.join(tmp_path, "good.yaml"), "w", encoding="utf-8") as handle:
        handle.write("nQubits: 1\nnMoments: 1\n")
    app = create_app(ServiceConfig(exercise_dir=str(tmp_path)))
    with TestClient(app) as client:
        assert client.get("/api/tasks/bad").status_code == 500
        # the listing keeps serving and just skips the broken file
        ids = [t["taskId"] for t in client.get("/api/tasks").json()["tasks"]]
        assert ids == ["good"]


def test_submit_requires_token(client):
    body = {"circuit": circuit_to_obj(two_cx_attempt())}
    assert client.post("/api/tasks/copy_bits/attempts", json=body).status_code == 401
    resp = client.post(
        "/api/tasks/copy_bits/attempts",
        json=body,
        headers={"Authorization": "Bearer wrong"},
    )
    assert resp.status_code == 401


def test_submit_correct_attempt(client):
    body = {"circuit": circuit_to_obj(two_cx_attempt())}
    resp = client.post("/api/tasks/copy_bits/attempts", json=body, headers=STUDENT)
    assert resp.status_code == 201
    out = resp.json()
    assert out["taskId"] == "copy_bits"
    assert out["userId"] == "student"
    assert out["id"] == 1
    assert out["submittedAt"]
    assert out["result"] == {"correct": True, "points": 5.0, "feedback": "Oikein"}


def test_submit_condition_wrong(client):
    body = {"circuit": circuit_to_obj(three_cx_attempt())}
    resp = client.post("/api/tasks/copy_bits/attempts", json=body, headers=STUDENT)
    assert resp.status_code == 201
    result = resp.json()["result"]
    assert result["correct"] is False
    assert result["failedStage"] == "condition"
    assert result["feedback"].startswith("Väärin")


def test_submit_never_leaks_answers(client):
    # an equivalence failure has a counterexample server-side; students
    # must not receive it
    wrong = {
        "nQubits": 1,
        "nMoments": 2,
        "placements": [{"name": "X", "target": 0, "time": 0}],
    }
    resp = client.post(
        "/api/tasks/task3_hidden_gate/attempts", json={"circuit": wrong}, headers=STUDENT
    )
    assert resp.status_code == 201
    keys = set()
    collect_keys(resp.json(), keys)
    assert "counterexample" not in keys
    assert resp.json()["result"]["failedStage"] == "equivalence"


def test_student_surface_never_names_the_model(client):
    keys = set()
    collect_keys(client.get("/api/tasks").json(), keys)
    for task in ("copy_bits", "task1_probabilistic_gates", "task2_equivalent_circuit", "task3_hidden_gate"):
        collect_keys(client.get(f"/api/tasks/{task}").json(), keys)
    collect_keys(post_simulate(client, BELL, options={"return": "both"}).json(), keys)
    body = {"circuit": circuit_to_obj(two_cx_attempt())}
    collect_keys(
        client.post("/api/tasks/copy_bits/attempts", json=body, headers=STUDENT).json(), keys
    )
    assert keys.isdisjoint({"modelCircuit", "modelConditions", "counterexample"})


def test_submit_dimension_mismatch(client):
    wrong = {"nQubits": 2, "nMoments": 4, "placements": []}
    resp = client.post("/api/tasks/copy_bits/attempts", json={"circuit": wrong}, headers=STUDENT)
    assert resp.status_code == 400
    assert "qubits" in resp.json()["detail"]


def test_submit_disallowed_gate(client):
    offpalette = {
        "nQubits": 3,
        "nMoments": 4,
        "placements": [{"name": "H", "target": 0, "time": 0}],
    }
    resp = client.post(
        "/api/tasks/copy_bits/attempts", json={"circuit": offpalette}, headers=STUDENT
    )
    assert resp.status_code == 400
    assert "not allowed" in resp.json()["detail"]


def test_submit_unknown_task(client):
    body = {"circuit": circuit_to_obj(two_cx_attempt())}
    assert client.post("/api/tasks/ghost/attempts", json=body, headers=STUDENT).status_code == 404


def test_attempt_listing_is_instructor_only(client):
    assert client.get("/api/tasks/copy_bits/attempts").status_code == 401
    assert client.get("/api/tasks/copy_bits/attempts", headers=STUDENT).status_code == 403


def test_attempt_listing_includes_counterexamples(client):
    wrong = {
        "nQubits": 1,
        "nMoments": 2,
        "placements": [{"name": "X", "target": 0, "time": 0}],
    }
    client.post("/api/tasks/task3_hidden_gate/attempts", json={"circuit": wrong}, headers=STUDENT)
    resp = client.get("/api/tasks/task3_hidden_gate/attempts", headers=INSTRUCTOR)
    assert resp.status_code == 200
    attempts = resp.json()["attempts"]
    assert len(attempts) == 1
    assert attempts[0]["userId"] == "student"
    assert attempts[0]["result"]["counterexample"]["input"] == "0"
    assert attempts[0]["circuit"]["placements"][0]["name"] == "X"


def test_attempt_listing_order_and_filter(client):
    good = {"circuit": circuit_to_obj(two_cx_attempt())}
    bad = {"circuit": circuit_to_obj(three_cx_attempt())}
    client.post("/api/tasks/copy_bits/attempts", json=bad, headers=STUDENT)
    client.post("/api/tasks/copy_bits/attempts", json=good, headers=INSTRUCTOR)
    client.post("/api/tasks/copy_bits/attempts", json=good, headers=STUDENT)
    listing = client.get("/api/tasks/copy_bits/attempts", headers=INSTRUCTOR).json()
    ids = [a["id"] for a in listing["attempts"]]
    assert ids == sorted(ids) and len(ids) == 3
    only = client.get("/api/tasks/copy_bits/attempts?user=student", headers=INSTRUCTOR).json()
    assert [a["userId"] for a in only["attempts"]] == ["student", "student"]


def test_stats_flow(client):
    fresh = client.get("/api/tasks/task2_equivalent_circuit/stats").json()
    assert fresh == {
        "taskId": "task2_equivalent_circuit",
        "attemptCount": 0,
        "averageAttemptsToCorrect": None,
    }
    bad = {"circuit": circuit_to_obj(three_cx_attempt())}
    good = {"circuit": circuit_to_obj(two_cx_attempt())}
    client.post("/api/tasks/copy_bits/attempts", json=bad, headers=STUDENT)
    client.post("/api/tasks/copy_bits/attempts", json=bad, headers=STUDENT)
    client.post("/api/tasks/copy_bits/attempts", json=good, headers=STUDENT)
    stats = client.get("/api/tasks/copy_bits/stats").json()
    assert stats["attemptCount"] == 3
    assert stats["averageAttemptsToCorrect"] == 3.0


def test_stats_unknown_task(client):
    assert client.get("/api/tasks/ghost/stats").status_code == 404


def test_custom_tokens(tmp_path):
    config = ServiceConfig(
        exercise_dir=EXERCISES,
        tokens={"sekrit": ("maija", "instructor")},
    )
    app = create_app(config)
    with TestClient(app) as client:
        headers = {"Authorization": "Bearer sekrit"}
        body = {"circuit": circuit_to_obj(two_cx_attempt())}
        resp = client.post("/api/tasks/copy_bits/attempts", json=body, headers=headers)
        assert resp.status_code == 201
        assert resp.json()["userId"] == "maija"
        # the dev tokens are gone when custom ones are configured
        assert (
            client.post("/api/tasks/copy_bits/attempts", json=body, headers=STUDENT).status_code
            == 401
        )
