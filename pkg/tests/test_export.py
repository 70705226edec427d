import json

import numpy as np
import pytest

from conftest import almost, listing1_model
from qasm_reader import qasm_probabilities
from qugrid import (
    OPENQASM_2,
    QISKIT,
    Circuit,
    Distribution,
    ExportError,
    GateDefinition,
    GatePlacement,
    InvalidCircuitError,
    UnsupportedGateInDialect,
    default_registry,
    export_circuit,
    export_results,
    initial_state,
    probabilities,
    simulate,
)

CX = Circuit(2, 1, (GatePlacement("X", 1, 0, controls=frozenset({0})),))


def qasm_lines(circuit, registry):
    return export_circuit(circuit, registry, OPENQASM_2).splitlines()


def instruction_lines(circuit, registry):
    return [
        line
        for line in qasm_lines(circuit, registry)
        if line and not line.startswith(("//", "OPENQASM", "qreg", "gate "))
    ]


def test_single_cx(registry):
    lines = qasm_lines(CX, registry)
    assert "OPENQASM 2.0;" in lines
    assert "qreg q[2];" in lines
    assert instruction_lines(CX, registry) == ["CX q[0],q[1];"]
    # the built-in two-qubit primitive needs no macro definition
    assert not any(line.startswith("gate ") for line in lines)


def test_copy_model_two_controlled_x(registry):
    assert instruction_lines(listing1_model(), registry) == [
        "CX q[0],q[1];",
        "CX q[1],q[2];",
    ]


def test_anti_control_is_x_conjugated(registry):
    axc = Circuit(2, 1, (GatePlacement("X", 1, 0, anti_controls=frozenset({0})),))
    assert instruction_lines(axc, registry) == [
        "x q[0];",
        "CX q[0],q[1];",
        "x q[0];",
    ]


def test_emission_follows_time_order(registry):
    scrambled = Circuit(
        1, 2, (GatePlacement("X", 0, 1), GatePlacement("H", 0, 0))
    )
    assert instruction_lines(scrambled, registry) == ["h q[0];", "x q[0];"]


def test_macros_are_defined_before_use(registry):
    circuit = Circuit(2, 1, (GatePlacement("SX", 1, 0, controls=frozenset({0})),))
    text = export_circuit(circuit, registry, OPENQASM_2)
    assert text.index("gate csx") < text.index("csx q[0],q[1];")


def test_program_is_self_contained(registry):
    circuit = Circuit(2, 2, (GatePlacement("H", 0, 0), GatePlacement("SWAP", 0, 1, swap_partner=1)))
    text = export_circuit(circuit, registry, OPENQASM_2)
    assert "include" not in text
    # every non-builtin instruction has a definition in the program
    defined = {line.split()[1] for line in text.splitlines() if line.startswith("gate ")}
    assert defined == {"h", "swap"}


def _macro_cases():
    cases = []
    for name in ("X", "Y", "Z", "H", "S", "T", "SX"):
        cases.append(Circuit(3, 1, (GatePlacement(name, 2, 0),)))
        cases.append(Circuit(3, 1, (GatePlacement(name, 2, 0, controls=frozenset({0})),)))
        cases.append(
            Circuit(3, 1, (GatePlacement(name, 2, 0, anti_controls=frozenset({1})),))
        )
    cases.append(Circuit(3, 1, (GatePlacement("X", 2, 0, controls=frozenset({0, 1})),)))
    cases.append(
        Circuit(
            3,
            1,
            (GatePlacement("X", 2, 0, controls=frozenset({0}), anti_controls=frozenset({1})),),
        )
    )
    cases.append(Circuit(3, 1, (GatePlacement("SWAP", 1, 0, swap_partner=2),)))
    cases.append(
        Circuit(3, 1, (GatePlacement("SWAP", 1, 0, swap_partner=2, controls=frozenset({0})),))
    )
    cases.append(
        Circuit(3, 1, (GatePlacement("SWAP", 1, 0, swap_partner=2, anti_controls=frozenset({0})),))
    )
    return cases


@pytest.mark.parametrize("circuit", _macro_cases(), ids=lambda c: repr(c.placements[0])[:60])
def test_every_macro_reproduces_the_engine(circuit):
    # run the emitted program through an independent interpreter that only
    # knows the QASM built-ins, and compare output probabilities
    registry = default_registry()
    text = export_circuit(circuit, registry, OPENQASM_2)
    for i in range(2**circuit.n_qubits):
        bits = format(i, f"0{circuit.n_qubits}b")
        expected = probabilities(simulate(circuit, bits, registry)).probabilities
        assert almost(qasm_probabilities(text, bits), expected)


def test_mixed_deep_program_round_trips(registry):
    circuit = Circuit(
        4,
        5,
        (
            GatePlacement("H", 0, 0),
            GatePlacement("SX", 3, 0),
            GatePlacement("SWAP", 1, 1, swap_partner=3, controls=frozenset({0})),
            GatePlacement("Y", 2, 2, anti_controls=frozenset({0})),
            GatePlacement("T", 1, 2, controls=frozenset({3})),
            GatePlacement("X", 2, 3, controls=frozenset({0, 1})),
            GatePlacement("H", 3, 4, controls=frozenset({2})),
        ),
    )
    text = export_circuit(circuit, registry, OPENQASM_2)
    for i in range(16):
        bits = format(i, "04b")
        expected = probabilities(simulate(circuit, bits, registry)).probabilities
        assert almost(qasm_probabilities(text, bits), expected)


def test_custom_gate_has_no_qasm_form():
    g1 = GateDefinition("G1", np.diag([1, -1]).astype(complex))
    registry = default_registry().with_gates((g1,))
    circuit = Circuit(1, 1, (GatePlacement("G1", 0, 0),))
    with pytest.raises(UnsupportedGateInDialect, match="G1"):
        export_circuit(circuit, registry, OPENQASM_2)


def test_control_stack_too_deep_for_qasm(registry):
    deep = Circuit(4, 1, (GatePlacement("Y", 3, 0, controls=frozenset({0, 1})),))
    with pytest.raises(UnsupportedGateInDialect, match="2 control"):
        export_circuit(deep, registry, OPENQASM_2)
    x3 = Circuit(4, 1, (GatePlacement("X", 3, 0, controls=frozenset({0, 1, 2})),))
    with pytest.raises(UnsupportedGateInDialect):
        export_circuit(x3, registry, OPENQASM_2)


def test_export_validates_first(registry):
    broken = Circuit(1, 1, (GatePlacement("X", 0, 0, controls=frozenset({0})),))
    with pytest.raises(InvalidCircuitError):
        export_circuit(broken, registry, OPENQASM_2)


def test_unknown_format(registry):
    with pytest.raises(ExportError):
        export_circuit(CX, registry, "qasm3")


def test_qiskit_single_cx(registry):
    source = export_circuit(CX, registry, QISKIT)
    assert "from qiskit import QuantumCircuit" in source
    assert "qc = QuantumCircuit(2)" in source
    assert "qc.append(XGate().control(1, ctrl_state=1), [0, 1])" in source
    compile(source, "<export>", "exec")


def test_qiskit_anti_control_state_bits(registry):
    mixed = Circuit(
        3,
        1,
        (GatePlacement("X", 2, 0, controls=frozenset({0}), anti_controls=frozenset({1})),),
    )
    source = export_circuit(mixed, registry, QISKIT)
    # control args are wires 0,1 in that order; bit 0 fires on 1, bit 1 on 0
    assert "XGate().control(2, ctrl_state=1), [0, 1, 2])" in source


def test_qiskit_custom_gate_uses_unitary():
    g1 = GateDefinition("G1", np.diag([1, -1]).astype(complex))
    registry = default_registry().with_gates((g1,))
    circuit = Circuit(1, 1, (GatePlacement("G1", 0, 0),))
    source = export_circuit(circuit, registry, QISKIT)
    assert "UnitaryGate(np.array([" in source
    assert "label='G1'" in source
    assert "import numpy as np" in source
    compile(source, "<export>", "exec")


def test_qiskit_swap(registry):
    swap = Circuit(3, 1, (GatePlacement("SWAP", 0, 0, swap_partner=2),))
    source = export_circuit(swap, registry, QISKIT)
    assert "qc.append(SwapGate(), [0, 2])" in source


def _bell_state(registry, bell_circuit):
    state = simulate(bell_circuit, "00", registry)
    return state, probabilities(state)


def test_results_csv_bell(registry, bell_circuit):
    state, dist = _bell_state(registry, bell_circuit)
    text = export_results(state, dist, "csv")
    lines = text.splitlines()
    assert lines[0] == "bitstring,re,im,p"
    assert len(lines) == 5
    parsed = [line.split(",") for line in lines[1:]]
    assert [row[0] for row in parsed] == ["00", "01", "10", "11"]
    # repr floats parse back to the exact binary values
    for i, row in enumerate(parsed):
        assert float(row[1]) == float(state.amplitudes[i].real)
        assert float(row[2]) == float(state.amplitudes[i].imag)
        assert float(row[3]) == float(dist.probabilities[i])
    assert float(parsed[0][3]) == pytest.approx(0.5)
    assert float(parsed[3][3]) == pytest.approx(0.5)


def test_results_csv_point_mass(registry):
    circuit = listing1_model()
    state = simulate(circuit, "100", registry)
    text = export_results(state, probabilities(state), "csv")
    rows = text.splitlines()[1:]
    assert "111,1.0,0.0,1.0" in rows
    assert sum(1 for row in rows if row.endswith(",1.0")) == 1


def test_results_csv_single_wire():
    state = initial_state("0")
    text = export_results(state, probabilities(state), "csv")
    assert text == "bitstring,re,im,p\n0,1.0,0.0,1.0\n1,0.0,0.0,0.0\n"


def test_results_json_bell(registry, bell_circuit):
    state, dist = _bell_state(registry, bell_circuit)
    records = json.loads(export_results(state, dist, "json"))
    assert [r["bitstring"] for r in records] == ["00", "01", "10", "11"]
    for i, record in enumerate(records):
        assert set(record) == {"bitstring", "re", "im", "p"}
        assert record["re"] == float(state.amplitudes[i].real)
        assert record["p"] == float(dist.probabilities[i])


def test_results_probability_column_sums_to_one(registry):
    rng = np.random.default_rng(17)
    from conftest import random_circuit

    for _ in range(10):
        circuit = random_circuit(rng, registry, n_qubits=3, depth=4)
        state = simulate(circuit, "000", registry)
        dist = probabilities(state)
        rows = export_results(state, dist, "csv").splitlines()[1:]
        total = sum(float(row.split(",")[3]) for row in rows)
        assert abs(total - 1.0) < 1e-9


def test_results_length_mismatch(registry):
    state = initial_state("00")
    with pytest.raises(ExportError):
        export_results(state, Distribution(np.array([1.0, 0.0])), "csv")


def test_results_unknown_format():
    state = initial_state("0")
    with pytest.raises(ExportError):
        export_results(state, probabilities(state), "yaml")
