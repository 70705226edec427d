import numpy as np
import pytest

from qugrid.gates import (
    GateDefinition,
    GateDefinitionError,
    GateRegistry,
    default_registry,
    gate_from_obj,
    gate_to_obj,
    unitarity_defect,
)


def test_default_registry_contents():
    names = default_registry().names
    assert names == ("X", "Y", "Z", "H", "S", "T", "SX", "SWAP")


def test_default_gates_unitary_within_tolerance():
    for definition in default_registry():
        assert unitarity_defect(definition.matrix) <= 1e-10


def test_sx_squares_to_x():
    registry = default_registry()
    sx = registry.get("SX").matrix
    x = registry.get("X").matrix
    assert np.allclose(sx @ sx, x, atol=1e-12, rtol=0)

def test_swap_is_two_qubit():
    swap = default_registry().get("SWAP")
    assert swap.arity == 2
    assert swap.matrix.shape == (4, 4)


def test_non_unitary_matrix_rejected():
    with pytest.raises(GateDefinitionError):
        GateDefinition("BAD", np.array([[1, 0], [0, 2]], dtype=complex))


def test_wrong_dimension_rejected():
    with pytest.raises(GateDefinitionError):
        GateDefinition("BAD", np.eye(3, dtype=complex))


def test_empty_name_rejected():
    with pytest.raises(GateDefinitionError):
        GateDefinition("", np.eye(2, dtype=complex))


def test_duplicate_names_rejected():
    x = default_registry().get("X")
    with pytest.raises(GateDefinitionError):
        GateRegistry((x, x))
    with pytest.raises(GateDefinitionError):
        default_registry().with_gates([GateDefinition("X", np.eye(2, dtype=complex))])


def test_with_gates_appends_in_order():
    extra = GateDefinition("G1", np.eye(2, dtype=complex))
    registry = default_registry().with_gates([extra])
    assert registry.names[-1] == "G1"
    assert registry.get("G1") == extra
    assert "SWAP" in registry


def test_unknown_name_raises_keyerror():
    with pytest.raises(KeyError):
        default_registry().get("NOPE")


def test_gate_obj_round_trip():
    z = GateDefinition("G1", np.array([[1, 0], [0, -1]], dtype=complex))
    obj = gate_to_obj(z)
    assert obj["name"] == "G1"
    assert obj["matrix"] == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]
    assert gate_from_obj(obj) == z


def test_gate_obj_round_trip_two_qubit():
    swap = default_registry().get("SWAP")
    assert gate_from_obj(gate_to_obj(swap)) == swap


def test_gate_from_obj_rejects_ragged_matrix():
    with pytest.raises(GateDefinitionError):
        gate_from_obj({"name": "G", "matrix": [[[1, 0]], [[0, 0], [1, 0]]]})
