"""Statevector simulation, output probabilities, and shot sampling.

Bit-order convention used everywhere (displays, regex filters, exports):
qubit 0 is the top wire and the most significant bit of the basis-state
index, so bitstrings read top-to-bottom and ``int(bits, 2)`` is the index.

Gates are applied in place on the controlled subspace (strided slices of
the reshaped amplitude tensor), never by building the dense 2^n operator;
the dense construction exists only as a test oracle. Global phase is not
normalized away; observable contracts are stated on probabilities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GatePlacement, validate
from .gates import SWAP, GateRegistry

NORM_TOL = 1e-9


class SimulationError(ValueError):
    """Base for simulation-time failures."""


class InvalidInputError(SimulationError):
    """Input bitstring malformed or of the wrong length."""


class InvalidCircuitError(SimulationError):
    """Circuit failed structural validation; carries the violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        details = "; ".join(str(v) for v in self.violations)
        super().__init__(f"circuit is not well-formed: {details}")


def bits_to_index(bits: str) -> int:
    if not bits or any(ch not in "01" for ch in bits):
        raise InvalidInputError(f"input must be a non-empty 0/1 string, got {bits!r}")
    return int(bits, 2)


def index_to_bits(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over the 2^n computational basis states."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", amplitudes)
        n = len(amplitudes)
        if n < 2 or n & (n - 1):
            raise SimulationError(f"amplitude vector length {n} is not a power of two")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise SimulationError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")

    @property
    def n_qubits(self) -> int:
        return len(self.amplitudes).bit_length() - 1

    def as_pairs(self) -> list[tuple[str, float, float]]:
        """Export form: (bitstring, real, imag) per basis state."""
        n = self.n_qubits
        return [
            (index_to_bits(i, n), float(a.real), float(a.imag))
            for i, a in enumerate(self.amplitudes)
        ]


@dataclass(frozen=True, eq=False)
class Distribution:
    """Output probabilities indexed by basis bitstring."""

    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probabilities = np.asarray(self.probabilities, dtype=float).reshape(-1)
        object.__setattr__(self, "probabilities", probabilities)
        n = len(probabilities)
        if n < 2 or n & (n - 1):
            raise SimulationError(f"probability vector length {n} is not a power of two")
        if np.any(probabilities < -NORM_TOL):
            raise SimulationError("probabilities must be non-negative")
        total = float(probabilities.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise SimulationError(f"probabilities sum to {total}, expected 1")

    @property
    def n_qubits(self) -> int:
        return len(self.probabilities).bit_length() - 1

    def to_dict(self, include_zeros: bool = False) -> dict[str, float]:
        n = self.n_qubits
        return {
            index_to_bits(i, n): float(p)
            for i, p in enumerate(self.probabilities)
            if include_zeros or p > 0.0
        }

    def as_pairs(self) -> list[tuple[str, float]]:
        """Export form: (bitstring, probability) per basis state."""
        n = self.n_qubits
        return [(index_to_bits(i, n), float(p)) for i, p in enumerate(self.probabilities)]


@dataclass(frozen=True)
class ShotRecord:
    """One measurement of all qubits: running number, input, and outcome."""

    index: int
    input: str
    output: str


@dataclass(frozen=True)
class SamplingMode:
    """How displayed probabilities are produced: exact ("matrix"),
    auto-sampled with a fixed shot count ("sample"), or accumulated from
    user-triggered shots ("manual")."""

    kind: str
    shots: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("matrix", "sample", "manual"):
            raise ValueError(f"unknown sampling mode {self.kind!r}")
        if self.kind == "sample":
            if self.shots is None or self.shots < 1:
                raise ValueError("sample mode needs a shot count >= 1")
        elif self.shots is not None:
            raise ValueError(f"{self.kind} mode takes no shot count")


MATRIX = SamplingMode("matrix")
MANUAL = SamplingMode("manual")


def initial_state(bits: str) -> StateVector:
    """Basis state for a classical input bitstring."""
    index = bits_to_index(bits)
    amplitudes = np.zeros(2 ** len(bits), dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(amplitudes)


def _apply_on_axes(block: np.ndarray, matrix: np.ndarray, axes: list[int]) -> np.ndarray:
    """Apply a 2^k unitary to the given k tensor axes of ``block``."""
    k = len(axes)
    moved = np.moveaxis(block, axes, range(k))
    shape = moved.shape
    flat = moved.reshape(2 ** k, -1)
    updated = matrix @ flat
    return np.moveaxis(updated.reshape(shape), range(k), axes)


def _operands(placement: GatePlacement, registry: GateRegistry) -> tuple[tuple[int, ...], np.ndarray]:
    if placement.name == SWAP:
        if placement.swap_partner is None:
            raise SimulationError("SWAP placement without swapPartner")
        return (placement.target, placement.swap_partner), registry.get(SWAP).matrix
    definition = registry.get(placement.name)
    operands = tuple(range(placement.target, placement.target + definition.arity))
    return operands, definition.matrix


def apply_placement(
    state: StateVector, placement: GatePlacement, registry: GateRegistry
) -> StateVector:
    """Apply one placement: the gate unitary acts on the target span exactly
    on the subspace where every control reads 1 and every anti-control reads
    0; the rest of the state passes through unchanged."""
    n = state.n_qubits
    operands, matrix = _operands(placement, registry)
    for row in operands + tuple(placement.controls) + tuple(placement.anti_controls):
        if not 0 <= row < n:
            raise SimulationError(f"placement row {row} outside the {n}-qubit state")
    psi = state.amplitudes.copy().reshape([2] * n)
    index: list = [slice(None)] * n
    for control in placement.controls:
        index[control] = 1
    for anti in placement.anti_controls:
        index[anti] = 0
    fixed = placement.controls | placement.anti_controls
    # Axis positions of the operands inside the sliced block: integer
    # indexing drops the control axes that precede them.
    axes = [q - sum(1 for f in fixed if f < q) for q in operands]
    block = psi[tuple(index)]
    psi[tuple(index)] = _apply_on_axes(block, matrix, axes)
    return StateVector(psi.reshape(-1))


def simulate(circuit: Circuit, input_bits: str, registry: GateRegistry) -> StateVector:
    """Full statevector after running the circuit on a classical input.

    Placements are applied in moment order; within a moment the canonical
    order is by target row, which is immaterial (disjoint supports) but
    keeps the fold deterministic for any listing order.
    """
    violations = validate(circuit, registry)
    if violations:
        raise InvalidCircuitError(violations)
    if len(input_bits) != circuit.n_qubits:
        raise InvalidInputError(
            f"input {input_bits!r} has {len(input_bits)} bits, circuit has {circuit.n_qubits} qubits"
        )
    state = initial_state(input_bits)
    for placement in sorted(circuit.placements, key=lambda p: (p.time, p.target)):
        state = apply_placement(state, placement, registry)
    return state


def probabilities(state: StateVector) -> Distribution:
    """Born rule: p_i = |amplitude_i|^2."""
    return Distribution(np.abs(state.amplitudes) ** 2)


def _draw_indices(dist: Distribution, rng: np.random.Generator, count: int) -> np.ndarray:
    # Inverse-CDF lookup over PCG64 uniforms; documented so golden sampling
    # values stay stable across platforms.
    cdf = np.cumsum(dist.probabilities)
    cdf[-1] = 1.0
    draws = np.searchsorted(cdf, rng.random(count), side="right")
    return np.minimum(draws, len(dist.probabilities) - 1)


def sample(dist: Distribution, n: int, seed: int | None = None) -> dict[str, int]:
    """Histogram of ``n`` shots drawn from the distribution.

    Deterministic for a fixed seed: the generator is numpy's PCG64
    (``default_rng(seed)``) and outcomes come from an inverse-CDF lookup.
    """
    if n < 1:
        raise ValueError(f"shot count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    indices = _draw_indices(dist, rng, n)
    counts = np.bincount(indices, minlength=len(dist.probabilities))
    n_qubits = dist.n_qubits
    return {
        index_to_bits(i, n_qubits): int(c) for i, c in enumerate(counts) if c > 0
    }


def measure_shot(
    dist: Distribution, input_bits: str, rng: np.random.Generator, index: int = 1
) -> ShotRecord:
    """One user-triggered measurement; the caller keeps the running index."""
    outcome = int(_draw_indices(dist, rng, 1)[0])
    return ShotRecord(index=index, input=input_bits, output=index_to_bits(outcome, dist.n_qubits))


def empirical_distribution(dist: Distribution, shots: int, seed: int | None = None) -> Distribution:
    """Sampled frequencies, for the "sample" display mode."""
    counts = sample(dist, shots, seed)
    frequencies = np.zeros(len(dist.probabilities))
    for bits, count in counts.items():
        frequencies[bits_to_index(bits)] = count / shots
    return Distribution(frequencies)
