import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))  # oracles, qasm_reader

from qugrid import Circuit, GatePlacement, default_registry, parse_exercise

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
EXERCISES = os.path.join(REPO, "exercises")
FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def load_exercise(name: str):
    return parse_exercise(read(os.path.join(EXERCISES, name + ".yaml")))


def almost(p, q, tol=1e-9):
    return np.allclose(np.asarray(p), np.asarray(q), atol=tol, rtol=0)


@pytest.fixture
def registry():
    return default_registry()


@pytest.fixture
def bell_circuit():
    return Circuit(
        2, 2, (GatePlacement("H", 0, 0), GatePlacement("X", 1, 1, controls=frozenset({0})))
    )


def listing1_model() -> Circuit:
    return Circuit(
        3,
        4,
        (
            GatePlacement("X", 1, 0, controls=frozenset({0})),
            GatePlacement("X", 2, 1, controls=frozenset({1})),
        ),
    )


def two_cx_attempt() -> Circuit:
    return listing1_model()


def three_cx_attempt() -> Circuit:
    # Same GF(2) map (a,b,c) -> (a, a+b, a+b+c) with three gates.
    return Circuit(
        3,
        4,
        (
            GatePlacement("X", 2, 0, controls=frozenset({1})),
            GatePlacement("X", 1, 1, controls=frozenset({0})),
            GatePlacement("X", 2, 2, controls=frozenset({0})),
        ),
    )


def random_circuit(rng, registry, n_qubits=None, depth=None) -> Circuit:
    """Well-formed random circuit: disjoint placements per moment, random
    controls, anti-controls, and swaps."""
    n = int(n_qubits or rng.integers(1, 6))
    d = int(depth or rng.integers(1, 9))
    placements = []
    for t in range(d):
        free = list(range(n))
        rng.shuffle(free)
        while free:
            name = str(rng.choice([g for g in registry.names if g != "SWAP"]))
            target = free.pop()
            if len(free) >= 1 and rng.random() < 0.2:
                placements.append(GatePlacement("SWAP", target, t, swap_partner=free.pop()))
                continue
            controls, antis = set(), set()
            while free and rng.random() < 0.4:
                dot = free.pop()
                (controls if rng.random() < 0.5 else antis).add(dot)
            placements.append(
                GatePlacement(
                    name,
                    target,
                    t,
                    controls=frozenset(controls),
                    anti_controls=frozenset(antis),
                )
            )
    return Circuit(n, d, tuple(placements))
