#!/usr/bin/env python3
"""Regenerate the conformance fixtures under tests/fixtures/.

The browser editor ships its own small statevector engine; these fixtures
pin it to the service engine. Cases are generated by the installed qugrid
package (pip install -e ../..), so after any engine change:

    python3 scripts/gen_fixtures.py

and commit the refreshed JSON.
"""
from __future__ import annotations

import json
import os

import numpy as np
import yaml

from qugrid import (
    Circuit,
    GatePlacement,
    circuit_from_obj,
    circuit_to_obj,
    default_registry,
    exercise_to_obj,
    grade,
    grade_result_to_obj,
    parse_exercise,
    probabilities,
    simulate,
)

HERE = os.path.dirname(os.path.abspath(__file__))
REPO = os.path.dirname(os.path.dirname(HERE))
OUT_DIR = os.path.join(HERE, os.pardir, "tests", "fixtures")

ONE_QUBIT = ("X", "Y", "Z", "H", "S", "T", "SX")

SQSWAP = {
    "name": "SQSWAP",
    "matrix": [
        [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        [[0.0, 0.0], [0.5, 0.5], [0.5, -0.5], [0.0, 0.0]],
        [[0.0, 0.0], [0.5, -0.5], [0.5, 0.5], [0.0, 0.0]],
        [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
    ],
}

G1 = {"name": "G1", "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]}


def case(name: str, doc: dict, inputs: list[str]) -> list[dict]:
    circuit, custom = circuit_from_obj(doc, "circuit")
    registry = default_registry().with_gates(custom)
    out = []
    for bits in inputs:
        state = simulate(circuit, bits, registry)
        probs = [float(p) for p in probabilities(state).probabilities]
        out.append({"name": f"{name}/{bits}", "circuit": doc, "input": bits, "probabilities": probs})
    return out


def all_inputs(n: int) -> list[str]:
    return [format(i, f"0{n}b") for i in range(2**n)]


def doc(n_qubits: int, n_moments: int, placements: list[dict], custom=None) -> dict:
    out = {"nQubits": n_qubits, "nMoments": n_moments, "placements": placements}
    if custom:
        out["customGates"] = custom
    return out


def named_cases() -> list[dict]:
    cases: list[dict] = []
    for gate in ONE_QUBIT:
        cases += case(f"{gate}-plain", doc(2, 1, [{"name": gate, "target": 0, "time": 0}]), all_inputs(2))
        cases += case(
            f"{gate}-controlled",
            doc(2, 1, [{"name": gate, "target": 1, "time": 0, "controls": [0]}]),
            all_inputs(2),
        )
        cases += case(
            f"{gate}-anti",
            doc(2, 1, [{"name": gate, "target": 0, "time": 0, "antiControls": [1]}]),
            all_inputs(2),
        )
    cases += case(
        "swap-plain", doc(3, 1, [{"name": "SWAP", "target": 0, "time": 0, "swapPartner": 2}]), all_inputs(3)
    )
    cases += case(
        "swap-up", doc(3, 1, [{"name": "SWAP", "target": 2, "time": 0, "swapPartner": 0}]), all_inputs(3)
    )
    cases += case(
        "swap-controlled",
        doc(3, 1, [{"name": "SWAP", "target": 1, "time": 0, "swapPartner": 2, "controls": [0]}]),
        all_inputs(3),
    )
    cases += case(
        "swap-anti",
        doc(3, 1, [{"name": "SWAP", "target": 0, "time": 0, "swapPartner": 1, "antiControls": [2]}]),
        all_inputs(3),
    )
    cases += case(
        "toffoli",
        doc(3, 1, [{"name": "X", "target": 2, "time": 0, "controls": [0, 1]}]),
        all_inputs(3),
    )
    cases += case(
        "mixed-dots",
        doc(4, 1, [{"name": "H", "target": 2, "time": 0, "controls": [0], "antiControls": [3]}]),
        all_inputs(4),
    )
    cases += case("custom-g1", doc(1, 2, [{"name": "G1", "target": 0, "time": 0}], [G1]), all_inputs(1))
    cases += case(
        "custom-g1-after-h",
        doc(1, 2, [{"name": "H", "target": 0, "time": 0}, {"name": "G1", "target": 0, "time": 1}], [G1]),
        all_inputs(1),
    )
    cases += case(
        "custom-sqswap",
        doc(3, 1, [{"name": "SQSWAP", "target": 1, "time": 0}], [SQSWAP]),
        all_inputs(3),
    )
    cases += case(
        "custom-sqswap-controlled",
        doc(3, 1, [{"name": "SQSWAP", "target": 1, "time": 0, "controls": [0]}], [SQSWAP]),
        all_inputs(3),
    )
    cases += case(
        "deep-mixed",
        doc(
            4,
            6,
            [
                {"name": "H", "target": 0, "time": 0},
                {"name": "SX", "target": 2, "time": 0},
                {"name": "X", "target": 1, "time": 1, "controls": [0]},
                {"name": "SWAP", "target": 2, "time": 2, "swapPartner": 3, "antiControls": [0]},
                {"name": "T", "target": 3, "time": 3, "controls": [1], "antiControls": [2]},
                {"name": "Y", "target": 0, "time": 4},
                {"name": "S", "target": 2, "time": 4, "controls": [3]},
                {"name": "H", "target": 1, "time": 5, "antiControls": [0, 2]},
            ],
        ),
        all_inputs(4),
    )
    return cases


def fixture_circuit_cases() -> list[dict]:
    cases = []
    for name in ("h", "hh", "bell", "two_cx", "three_cx"):
        with open(os.path.join(REPO, "tests", "fixtures", f"{name}.yaml"), encoding="utf-8") as fh:
            raw = yaml.safe_load(fh.read())
        circuit, _ = circuit_from_obj(raw, name)
        wire = circuit_to_obj(circuit)
        cases += case(f"fixture-{name}", wire, all_inputs(circuit.n_qubits))
    return cases


def random_cases(count: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        n = int(rng.integers(1, 6))
        depth = int(rng.integers(1, 9))
        placements = []
        for t in range(depth):
            free = list(rng.permutation(n))
            while free:
                q = int(free.pop())
                roll = rng.random()
                if roll < 0.3:
                    continue
                if roll < 0.45 and free:
                    partner = int(free.pop())
                    placements.append({"name": "SWAP", "target": q, "time": t, "swapPartner": partner})
                    continue
                entry: dict = {"name": str(rng.choice(ONE_QUBIT)), "target": q, "time": t}
                controls, antis = [], []
                while free and rng.random() < 0.35:
                    dot = int(free.pop())
                    (controls if rng.random() < 0.5 else antis).append(dot)
                if controls:
                    entry["controls"] = sorted(controls)
                if antis:
                    entry["antiControls"] = sorted(antis)
                placements.append(entry)
        wire = doc(n, depth, placements)
        size = 2**n
        picks = sorted(int(v) for v in rng.choice(size, size=min(3, size), replace=False))
        inputs = [format(v, f"0{n}b") for v in picks]
        cases += case(f"random-{i:02d}", wire, inputs)
    return cases


def grading_fixture() -> dict:
    with open(os.path.join(REPO, "exercises", "copy_bits.yaml"), encoding="utf-8") as fh:
        exercise = parse_exercise(fh.read())
    task = exercise_to_obj(exercise)
    task.pop("modelCircuit", None)
    task.pop("modelConditions", None)

    def attempt(name: str, placements: list[GatePlacement]) -> dict:
        circuit = Circuit(exercise.n_qubits, exercise.n_moments, tuple(placements), exercise.qubits)
        result = grade(circuit, exercise, exercise.registry())
        return {
            "name": name,
            "circuit": circuit_to_obj(circuit),
            "result": grade_result_to_obj(result, include_counterexample=False),
        }

    return {
        "taskId": "copy_bits",
        "task": task,
        "attempts": [
            attempt(
                "two-cx-correct",
                [
                    GatePlacement("X", 1, 0, controls=frozenset({0})),
                    GatePlacement("X", 2, 1, controls=frozenset({1})),
                ],
            ),
            attempt(
                "three-cx-condition-wrong",
                [
                    GatePlacement("X", 2, 0, controls=frozenset({1})),
                    GatePlacement("X", 1, 1, controls=frozenset({0})),
                    GatePlacement("X", 2, 2, controls=frozenset({0})),
                ],
            ),
        ],
    }


def main() -> None:
    engine = {"cases": named_cases() + fixture_circuit_cases() + random_cases(30, seed=777)}
    os.makedirs(OUT_DIR, exist_ok=True)
    with open(os.path.join(OUT_DIR, "engine_cases.json"), "w", encoding="utf-8") as fh:
        json.dump(engine, fh, indent=1)
        fh.write("\n")
    with open(os.path.join(OUT_DIR, "grading_cases.json"), "w", encoding="utf-8") as fh:
        json.dump(grading_fixture(), fh, indent=1, ensure_ascii=False)
        fh.write("\n")
    print(f"wrote {len(engine['cases'])} engine cases")


if __name__ == "__main__":
    main()
