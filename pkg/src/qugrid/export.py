"""Export circuits to OpenQASM 2.0 or Qiskit source, and results to text.

The QASM programs are self-contained: every gate used is defined in the
program itself from the built-in U and CX primitives, so no include file
is needed to run them. Anti-controls become x-conjugation around the
controlled form. Wire mapping is row i -> q[i] and is restated in the
header comment because external tools often print bitstrings with the
opposite significance convention; nothing is reversed silently.
"""
from __future__ import annotations

import io
import json

from .circuit import Circuit, validate
from .engine import Distribution, InvalidCircuitError, StateVector, index_to_bits
from .gates import SWAP, GateRegistry

OPENQASM_2 = "openqasm2"
QISKIT = "qiskit"


class ExportError(ValueError):
    pass


class UnsupportedGateInDialect(ExportError):
    """The circuit uses a gate the chosen output dialect cannot express."""


# Parameterless gate macros over the QASM built-ins U(theta,phi,lambda) and
# CX. Angles are spelled with pi so the text stays readable; each entry lists
# the macros it expands through so emitted programs define them first.
# Controlled variants are exact (global phase included), which matters when
# they are themselves conjugated or composed.
_QASM_DEFS: dict[str, tuple[tuple[str, ...], str, str]] = {
    "x": ((), "a", "U(pi,0,pi) a;"),
    "y": ((), "a", "U(pi,pi/2,pi/2) a;"),
    "z": ((), "a", "U(0,0,pi) a;"),
    "h": ((), "a", "U(pi/2,0,pi) a;"),
    "s": ((), "a", "U(0,0,pi/2) a;"),
    "sdg": ((), "a", "U(0,0,-pi/2) a;"),
    "t": ((), "a", "U(0,0,pi/4) a;"),
    "tdg": ((), "a", "U(0,0,-pi/4) a;"),
    # sqrt(X) up to the global phase exp(-i*pi/4); fine uncontrolled.
    "sx": (("sdg", "h"), "a", "sdg a; h a; sdg a;"),
    "swap": ((), "a,b", "CX a,b; CX b,a; CX a,b;"),
    "cy": (("sdg", "s"), "a,b", "sdg b; CX a,b; s b;"),
    "cz": (("h",), "a,b", "h b; CX a,b; h b;"),
    "ch": (
        ("h", "sdg", "t", "s", "x"),
        "a,b",
        "h b; sdg b; CX a,b; h b; t b; CX a,b; t b; h b; s b; x b; s a;",
    ),
    # Controlled phase gates: cs = diag(1,1,1,i), ct = diag(1,1,1,exp(i*pi/4)).
    "cs": ((), "a,b", "U(0,0,pi/4) a; CX a,b; U(0,0,-pi/4) b; CX a,b; U(0,0,pi/4) b;"),
    "ct": ((), "a,b", "U(0,0,pi/8) a; CX a,b; U(0,0,-pi/8) b; CX a,b; U(0,0,pi/8) b;"),
    # Exact controlled sqrt(X): phase pi/4 on the control, then the
    # controlled-u3(pi/2,-pi/2,pi/2) expansion with its angles inlined.
    "csx": (
        (),
        "a,b",
        "U(0,0,pi/4) a; U(0,0,pi/2) b; CX a,b; U(-pi/4,0,0) b; CX a,b; U(pi/4,-pi/2,0) b;",
    ),
    "ccx": (
        ("h", "t", "tdg"),
        "a,b,c",
        "h c; CX b,c; tdg c; CX a,c; t c; CX b,c; tdg c; CX a,c; "
        "t b; t c; h c; CX a,b; t a; tdg b; CX a,b;",
    ),
    "cswap": (("ccx",), "a,b,c", "CX c,b; ccx a,b,c; CX c,b;"),
}

# placement gate name -> QASM macro per number of effective controls.
_QASM_BY_CONTROLS: dict[str, dict[int, str]] = {
    "X": {0: "x", 1: "cx", 2: "ccx"},
    "Y": {0: "y", 1: "cy"},
    "Z": {0: "z", 1: "cz"},
    "H": {0: "h", 1: "ch"},
    "S": {0: "s", 1: "cs"},
    "T": {0: "t", 1: "ct"},
    "SX": {0: "sx", 1: "csx"},
    SWAP: {0: "swap", 1: "cswap"},
}


def _ordered(circuit: Circuit):
    return sorted(circuit.placements, key=lambda p: (p.time, p.target))


def _collect_defs(names: set[str]) -> list[str]:
    emitted: list[str] = []
    done: set[str] = set()

    def visit(name: str) -> None:
        if name in done or name == "cx":
            return
        done.add(name)
        deps, args, body = _QASM_DEFS[name]
        for dep in deps:
            visit(dep)
        emitted.append(f"gate {name} {args} {{ {body} }}")

    for name in sorted(names):
        visit(name)
    return emitted


def _qasm_header(circuit: Circuit) -> list[str]:
    return [
        "// Wire mapping: grid row i is q[i]; the top row is q[0].",
        "// Input/output bitstrings in the source tool read top row first,",
        "// i.e. q[0] is the leftmost (most significant) bit. Tools that",
        "// print q[0] as the rightmost bit show the same states reversed.",
        "OPENQASM 2.0;",
        f"qreg q[{circuit.n_qubits}];",
    ]


def _to_qasm(circuit: Circuit, registry: GateRegistry) -> str:
    ops: list[tuple[str, list[int], list[int]]] = []  # (macro, anti_wires, operand_wires)
    used: set[str] = set()
    for placement in _ordered(circuit):
        by_controls = _QASM_BY_CONTROLS.get(placement.name)
        if by_controls is None:
            raise UnsupportedGateInDialect(
                f"gate {placement.name!r} has no OpenQASM 2.0 form; "
                "export custom gates as framework source instead"
            )
        n_controls = len(placement.controls) + len(placement.anti_controls)
        macro = by_controls.get(n_controls)
        if macro is None:
            raise UnsupportedGateInDialect(
                f"{placement.name} with {n_controls} control dots has no OpenQASM 2.0 form"
            )
        if placement.name == SWAP:
            operands = [placement.target, placement.swap_partner]
        else:
            arity = registry.get(placement.name).arity
            operands = list(range(placement.target, placement.target + arity))
        # Dots come first in the macro's argument list, true and anti alike;
        # anti wires are flipped around the whole instruction.
        dots = sorted(placement.controls | placement.anti_controls)
        antis = sorted(placement.anti_controls)
        used.add(macro)
        if antis:
            used.add("x")
        ops.append((macro, antis, dots + operands))

    lines = _qasm_header(circuit)
    lines.extend(_collect_defs(used))
    for macro, antis, wires in ops:
        for wire in antis:
            lines.append(f"x q[{wire}];")
        args = ",".join(f"q[{w}]" for w in wires)
        if macro == "cx":
            lines.append(f"CX {args};")
        else:
            lines.append(f"{macro} {args};")
        for wire in antis:
            lines.append(f"x q[{wire}];")
    return "\n".join(lines) + "\n"


_QISKIT_SIMPLE = {
    "X": "XGate",
    "Y": "YGate",
    "Z": "ZGate",
    "H": "HGate",
    "S": "SGate",
    "T": "TGate",
    "SX": "SXGate",
    SWAP: "SwapGate",
}


def _to_qiskit(circuit: Circuit, registry: GateRegistry) -> str:
    body: list[str] = []
    needs_numpy = False
    needs_library: set[str] = set()
    needs_unitary = False
    for placement in _ordered(circuit):
        if placement.name == SWAP:
            operands = [placement.target, placement.swap_partner]
        else:
            arity = registry.get(placement.name).arity
            operands = list(range(placement.target, placement.target + arity))
        dots = sorted(placement.controls | placement.anti_controls)
        if placement.name in _QISKIT_SIMPLE:
            cls = _QISKIT_SIMPLE[placement.name]
            base = f"{cls}()"
            needs_library.add(cls)
        else:
            definition = registry.get(placement.name)
            rows = ", ".join(
                "[" + ", ".join(repr(complex(v)) for v in row) + "]"
                for row in definition.matrix
            )
            base = f"UnitaryGate(np.array([{rows}]), label={placement.name!r})"
            needs_unitary = True
            needs_numpy = True
        if dots:
            # ctrl_state bit j refers to the j-th control argument, least
            # significant first; anti-controls fire on 0.
            state = sum(1 << j for j, wire in enumerate(dots) if wire in placement.controls)
            gate = f"{base}.control({len(dots)}, ctrl_state={state})"
        else:
            gate = base
        wires = ", ".join(str(w) for w in dots + operands)
        body.append(f"qc.append({gate}, [{wires}])")

    lines = [
        "# Wire mapping: grid row i is circuit qubit i; the top row is qubit 0.",
        "# The source tool reads bitstrings top row first (qubit 0 leftmost).",
        "# Qiskit's own string convention prints qubit 0 rightmost; states are",
        "# the same, only the printed order differs.",
        "from qiskit import QuantumCircuit",
    ]
    if needs_library or needs_unitary:
        imports = sorted(needs_library) + (["UnitaryGate"] if needs_unitary else [])
        lines.append(f"from qiskit.circuit.library import {', '.join(imports)}")
    if needs_numpy:
        lines.append("import numpy as np")
    lines.append("")
    lines.append(f"qc = QuantumCircuit({circuit.n_qubits})")
    lines.extend(body)
    return "\n".join(lines) + "\n"


def export_circuit(circuit: Circuit, registry: GateRegistry, fmt: str) -> str:
    """Render the circuit as source text for an external toolchain.

    ``fmt`` is "openqasm2" or "qiskit". Raises UnsupportedGateInDialect
    when a gate (or its control stack) cannot be expressed in the target.
    """
    violations = validate(circuit, registry)
    if violations:
        raise InvalidCircuitError(violations)
    if fmt == OPENQASM_2:
        return _to_qasm(circuit, registry)
    if fmt == QISKIT:
        return _to_qiskit(circuit, registry)
    raise ExportError(f"unknown circuit format {fmt!r}")


def export_results(state: StateVector, dist: Distribution, fmt: str) -> str:
    """Render final state and probabilities, one record per basis state.

    ``fmt`` is "csv" (header row, then bitstring,re,im,p) or "json" (a
    list of records with those keys). State and distribution lengths
    must agree.
    """
    if len(state.amplitudes) != len(dist.probabilities):
        raise ExportError(
            f"state has {len(state.amplitudes)} amplitudes but distribution "
            f"has {len(dist.probabilities)} entries"
        )
    n = state.n_qubits
    rows = [
        (
            index_to_bits(i, n),
            float(state.amplitudes[i].real),
            float(state.amplitudes[i].imag),
            float(dist.probabilities[i]),
        )
        for i in range(len(state.amplitudes))
    ]
    if fmt == "csv":
        out = io.StringIO()
        out.write("bitstring,re,im,p\n")
        for bits, re_part, im_part, p in rows:
            out.write(f"{bits},{re_part!r},{im_part!r},{p!r}\n")
        return out.getvalue()
    if fmt == "json":
        return json.dumps(
            [
                {"bitstring": bits, "re": re_part, "im": im_part, "p": p}
                for bits, re_part, im_part, p in rows
            ],
            indent=2,
        )
    raise ExportError(f"unknown results format {fmt!r}")
