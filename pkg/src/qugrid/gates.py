"""Gate definitions and the registry backing the editor toolbar.

A registry is an ordered, immutable collection of named unitaries. The
default set covers the common teaching gates; instructors extend it with
custom matrix gates per exercise. Control and anti-control dots are toolbar
items, not gates: they become attributes of a placement.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNITARITY_TOL = 1e-10

# Distinguished toolbar names. SWAP has a registry entry (so it can be
# allowed/disallowed like any gate) but placements treat it specially via
# swapPartner; the dots are placement attributes only.
SWAP = "SWAP"
CONTROL = "control"
ANTI_CONTROL = "antiControl"
DOT_NAMES = (CONTROL, ANTI_CONTROL)


class GateDefinitionError(ValueError):
    """Raised for a malformed gate definition or registry."""


def unitarity_defect(matrix: np.ndarray) -> float:
    """Largest entrywise deviation of U†U from the identity."""
    dim = matrix.shape[0]
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim))))


@dataclass(frozen=True, eq=False)
class GateDefinition:
    """A named unitary covering ``arity`` adjacent qubit lines."""

    name: str
    matrix: np.ndarray
    arity: int = 1

    def __post_init__(self) -> None:
        if not self.name:
            raise GateDefinitionError("gate name must be non-empty")
        matrix = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", matrix)
        if self.arity < 1:
            raise GateDefinitionError(f"gate {self.name!r}: arity must be >= 1")
        dim = 2 ** self.arity
        if matrix.shape != (dim, dim):
            raise GateDefinitionError(
                f"gate {self.name!r}: matrix shape {matrix.shape} does not match "
                f"arity {self.arity} (expected {dim}x{dim})"
            )
        defect = unitarity_defect(matrix)
        if defect > UNITARITY_TOL:
            raise GateDefinitionError(
                f"gate {self.name!r}: matrix is not unitary (defect {defect:.3e})"
            )

    # dataclass equality is off because ndarray == is elementwise; compare
    # entries exactly so parsed copies of a definition count as equal.
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GateDefinition)
            and self.name == other.name
            and self.arity == other.arity
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    def __hash__(self) -> int:
        return hash((self.name, self.arity))


_SQRT2_INV = 1 / np.sqrt(2.0)

_DEFAULT_MATRICES: dict[str, np.ndarray] = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "SX": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
}

_SWAP_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


@dataclass(frozen=True, eq=False)
class GateRegistry:
    """Ordered gate definitions; the order is the toolbar order."""

    definitions: tuple[GateDefinition, ...]
    _by_name: dict[str, GateDefinition] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        by_name: dict[str, GateDefinition] = {}
        for definition in self.definitions:
            if definition.name in by_name:
                raise GateDefinitionError(f"duplicate gate name {definition.name!r}")
            by_name[definition.name] = definition
        object.__setattr__(self, "_by_name", by_name)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(self.definitions)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.definitions)

    def get(self, name: str) -> GateDefinition:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown gate {name!r}") from None

    def with_gates(self, extra: tuple[GateDefinition, ...] | list[GateDefinition]) -> "GateRegistry":
        """New registry with ``extra`` appended after the existing toolbar."""
        return GateRegistry(self.definitions + tuple(extra))


def default_registry() -> GateRegistry:
    """The stock toolbar: X, Y, Z, H, S, T, SX (square-root-of-X), SWAP."""
    definitions = [
        GateDefinition(name, matrix) for name, matrix in _DEFAULT_MATRICES.items()
    ]
    definitions.append(GateDefinition(SWAP, _SWAP_MATRIX, arity=2))
    return GateRegistry(tuple(definitions))


def gate_to_obj(definition: GateDefinition) -> dict:
    """Serializable form; complex entries become [re, im] pairs."""
    matrix = [
        [[float(entry.real), float(entry.imag)] for entry in row]
        for row in definition.matrix
    ]
    return {"name": definition.name, "matrix": matrix}


def gate_from_obj(obj: dict) -> GateDefinition:
    """Inverse of :func:`gate_to_obj`; raises GateDefinitionError on bad input."""
    if not isinstance(obj, dict):
        raise GateDefinitionError("custom gate must be a mapping")
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise GateDefinitionError("custom gate needs a non-empty string name")
    rows = obj.get("matrix")
    if not isinstance(rows, list) or not rows:
        raise GateDefinitionError(f"gate {name!r}: matrix must be a non-empty list of rows")
    parsed = []
    for row in rows:
        if not isinstance(row, list) or len(row) != len(rows):
            raise GateDefinitionError(f"gate {name!r}: matrix must be square")
        entries = []
        for entry in row:
            if (
                not isinstance(entry, (list, tuple))
                or len(entry) != 2
                or not all(isinstance(part, (int, float)) for part in entry)
            ):
                raise GateDefinitionError(
                    f"gate {name!r}: matrix entries must be [re, im] number pairs"
                )
            entries.append(complex(entry[0], entry[1]))
        parsed.append(entries)
    dim = len(parsed)
    arity = dim.bit_length() - 1
    if 2 ** arity != dim or arity < 1:
        raise GateDefinitionError(f"gate {name!r}: matrix dimension {dim} is not a power of two >= 2")
    return GateDefinition(name, np.array(parsed, dtype=complex), arity=arity)
