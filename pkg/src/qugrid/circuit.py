"""Circuit grid model: placements, qubit specs, structural validation.

The grid is nQubits rows by nMoments columns and its size is fixed at
construction. Every placement owns a set of cells (target span, control and
anti-control dots, swap partner); no two placements may share a cell. Row 0
is the top wire, moment 0 the leftmost column.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .gates import SWAP, GateRegistry


class CircuitError(ValueError):
    """Base for structural circuit errors."""


class OutOfBoundsError(CircuitError):
    pass


class CellOccupiedError(CircuitError):
    pass


class UnknownGateError(CircuitError):
    pass


class EmptyCellError(CircuitError):
    pass


@dataclass(frozen=True)
class QubitSpec:
    """One input wire: display name, initial bit, and whether the student
    may toggle it. ``notation`` overrides the exercise-wide display style."""

    name: str = ""
    value: int = 0
    editable: bool = True
    notation: str | None = None  # "bit" | "braket" | None (exercise default)

    def __post_init__(self) -> None:
        if self.value not in (0, 1):
            raise CircuitError(f"qubit value must be 0 or 1, got {self.value!r}")
        if self.notation not in (None, "bit", "braket"):
            raise CircuitError(f"qubit notation must be 'bit' or 'braket', got {self.notation!r}")


@dataclass(frozen=True)
class GatePlacement:
    """A gate dropped at (target row, time column) with optional control
    dots. SWAP placements name their second wire via ``swap_partner``."""

    name: str
    target: int
    time: int
    controls: frozenset[int] = frozenset()
    anti_controls: frozenset[int] = frozenset()
    swap_partner: int | None = None
    editable: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", frozenset(self.controls))
        object.__setattr__(self, "anti_controls", frozenset(self.anti_controls))

    def span(self, registry: GateRegistry) -> tuple[int, ...]:
        """Rows covered by the gate body (controls excluded)."""
        if self.name == SWAP:
            partner = self.swap_partner if self.swap_partner is not None else self.target
            return (self.target, partner)
        arity = registry.get(self.name).arity if self.name in registry else 1
        return tuple(range(self.target, self.target + arity))

    def cells(self, registry: GateRegistry) -> list[tuple[int, int]]:
        """Every (row, time) cell this placement occupies, duplicates kept
        so overlap within the placement is detectable."""
        rows = list(self.span(registry)) + sorted(self.controls) + sorted(self.anti_controls)
        return [(row, self.time) for row in rows]


@dataclass(frozen=True)
class Circuit:
    """Immutable-size grid of placements."""

    n_qubits: int
    n_moments: int
    placements: tuple[GatePlacement, ...] = ()
    qubits: tuple[QubitSpec, ...] = ()


class ViolationCode(Enum):
    UNKNOWN_GATE = "UnknownGate"
    OUT_OF_BOUNDS = "OutOfBounds"
    CELL_OCCUPIED = "CellOccupied"
    CONTROL_OVERLAPS_TARGET = "ControlOverlapsTarget"
    MISSING_SWAP_PARTNER = "MissingSwapPartner"
    UNEXPECTED_SWAP_PARTNER = "UnexpectedSwapPartner"
    QUBIT_COUNT_MISMATCH = "QubitCountMismatch"


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    message: str
    placement: GatePlacement | None = None

    def __str__(self) -> str:
        return f"{self.code.value}: {self.message}"


def new_circuit(
    n_qubits: int, n_moments: int, qubits: list[QubitSpec] | tuple[QubitSpec, ...] | None = None
) -> Circuit:
    """Empty circuit with a fixed grid; default qubits are editable zeros."""
    if n_qubits < 1 or n_moments < 1:
        raise CircuitError(
            f"grid dimensions must be positive, got {n_qubits}x{n_moments}"
        )
    if qubits is None:
        qubits = tuple(QubitSpec() for _ in range(n_qubits))
    else:
        qubits = tuple(qubits)
        if len(qubits) != n_qubits:
            raise CircuitError(
                f"expected {n_qubits} qubit specs, got {len(qubits)}"
            )
    return Circuit(n_qubits=n_qubits, n_moments=n_moments, qubits=qubits)


def _check_placement(circuit: Circuit, placement: GatePlacement, registry: GateRegistry) -> None:
    """Raise the first structural error for ``placement`` on ``circuit``."""
    if placement.name != SWAP and placement.name not in registry:
        raise UnknownGateError(f"gate {placement.name!r} is not in the registry")
    if not 0 <= placement.time < circuit.n_moments:
        raise OutOfBoundsError(
            f"time {placement.time} outside [0, {circuit.n_moments})"
        )
    if placement.name == SWAP:
        if placement.swap_partner is None:
            raise CircuitError("SWAP placement needs a swapPartner")
    elif placement.swap_partner is not None:
        raise CircuitError(f"gate {placement.name!r} cannot have a swapPartner")
    rows = placement.span(registry) + tuple(placement.controls) + tuple(placement.anti_controls)
    for row in rows:
        if not 0 <= row < circuit.n_qubits:
            raise OutOfBoundsError(f"row {row} outside [0, {circuit.n_qubits})")
    own = placement.cells(registry)
    if len(set(own)) != len(own):
        raise CellOccupiedError(
            "placement overlaps itself (control, anti-control, swap partner and "
            "gate body must sit on distinct rows)"
        )
    taken = occupancy(circuit, registry)
    for cell in own:
        if cell in taken:
            raise CellOccupiedError(f"cell (qubit {cell[0]}, time {cell[1]}) is occupied")


def occupancy(circuit: Circuit, registry: GateRegistry) -> dict[tuple[int, int], GatePlacement]:
    """Map of every occupied (row, time) cell to its placement."""
    cells: dict[tuple[int, int], GatePlacement] = {}
    for placement in circuit.placements:
        for cell in placement.cells(registry):
            cells[cell] = placement
    return cells


def place_gate(circuit: Circuit, placement: GatePlacement, registry: GateRegistry) -> Circuit:
    """New circuit with ``placement`` added; rejects collisions and bad bounds."""
    _check_placement(circuit, placement, registry)
    return replace(circuit, placements=circuit.placements + (placement,))


def remove_gate(circuit: Circuit, qubit: int, time: int, registry: GateRegistry) -> Circuit:
    """Remove the placement occupying (qubit, time); control dots count as
    part of their placement, so removing at a dot removes the whole gate."""
    target = occupancy(circuit, registry).get((qubit, time))
    if target is None:
        raise EmptyCellError(f"no placement at (qubit {qubit}, time {time})")
    remaining = tuple(p for p in circuit.placements if p is not target)
    return replace(circuit, placements=remaining)


def validate(circuit: Circuit, registry: GateRegistry) -> list[Violation]:
    """All structural violations; empty iff the circuit is well-formed.

    Pure: never raises on bad circuits, the findings are data.
    """
    violations: list[Violation] = []
    if len(circuit.qubits) not in (0, circuit.n_qubits):
        violations.append(
            Violation(
                ViolationCode.QUBIT_COUNT_MISMATCH,
                f"{len(circuit.qubits)} qubit specs for {circuit.n_qubits} qubits",
            )
        )
    seen: dict[tuple[int, int], GatePlacement] = {}
    for placement in circuit.placements:
        known = placement.name == SWAP or placement.name in registry
        if not known:
            violations.append(
                Violation(
                    ViolationCode.UNKNOWN_GATE,
                    f"gate {placement.name!r} is not in the registry",
                    placement,
                )
            )
        if placement.name == SWAP and placement.swap_partner is None:
            violations.append(
                Violation(
                    ViolationCode.MISSING_SWAP_PARTNER,
                    "SWAP placement needs a swapPartner",
                    placement,
                )
            )
        if placement.name != SWAP and placement.swap_partner is not None:
            violations.append(
                Violation(
                    ViolationCode.UNEXPECTED_SWAP_PARTNER,
                    f"gate {placement.name!r} cannot have a swapPartner",
                    placement,
                )
            )
        out_of_bounds = not 0 <= placement.time < circuit.n_moments
        rows = (
            placement.span(registry)
            + tuple(placement.controls)
            + tuple(placement.anti_controls)
        )
        out_of_bounds = out_of_bounds or any(
            not 0 <= row < circuit.n_qubits for row in rows
        )
        if out_of_bounds:
            violations.append(
                Violation(
                    ViolationCode.OUT_OF_BOUNDS,
                    f"placement of {placement.name!r} at (q{placement.target}, t{placement.time}) "
                    "does not fit the grid",
                    placement,
                )
            )
        own = placement.cells(registry)
        if len(set(own)) != len(own):
            violations.append(
                Violation(
                    ViolationCode.CONTROL_OVERLAPS_TARGET,
                    f"placement of {placement.name!r} overlaps itself at time {placement.time}",
                    placement,
                )
            )
        for cell in own:
            other = seen.get(cell)
            if other is not None and other is not placement:
                violations.append(
                    Violation(
                        ViolationCode.CELL_OCCUPIED,
                        f"cell (qubit {cell[0]}, time {cell[1]}) used by both "
                        f"{other.name!r} and {placement.name!r}",
                        placement,
                    )
                )
            else:
                seen[cell] = placement
    return violations


def placement_to_obj(placement: GatePlacement) -> dict:
    """Wire/YAML form of a placement; optional keys omitted when default."""
    obj: dict = {
        "name": placement.name,
        "target": placement.target,
        "time": placement.time,
    }
    if placement.controls:
        obj["controls"] = sorted(placement.controls)
    if placement.anti_controls:
        obj["antiControls"] = sorted(placement.anti_controls)
    if placement.swap_partner is not None:
        obj["swapPartner"] = placement.swap_partner
    if not placement.editable:
        obj["editable"] = False
    return obj


def qubit_to_obj(spec: QubitSpec) -> dict:
    obj: dict = {"value": spec.value}
    if spec.name:
        obj["name"] = spec.name
    if not spec.editable:
        obj["editable"] = False
    if spec.notation is not None:
        obj["notation"] = spec.notation
    return obj


def circuit_to_obj(circuit: Circuit) -> dict:
    """Wire/YAML form: the placement schema plus grid size and qubit specs."""
    return {
        "nQubits": circuit.n_qubits,
        "nMoments": circuit.n_moments,
        "qubits": [qubit_to_obj(q) for q in circuit.qubits],
        "placements": [placement_to_obj(p) for p in circuit.placements],
    }
