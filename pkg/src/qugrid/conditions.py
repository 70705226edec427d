"""Gate-count conditions attached to exercises.

Grammar: ``[C<k>]<NAME> <cmp> <int>``. The optional ``C<k>`` prefix
restricts the count to placements of gate NAME carrying exactly k control
dots (anti-controls included in k); without it every placement of NAME
counts. ``cmp`` is one of == != < <= > >=. Example: ``C1X == 2`` holds when
the circuit contains exactly two singly-controlled X gates.
"""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass

from .circuit import Circuit, GatePlacement

_COMPARATORS = {
    "==": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}

_CONDITION_RE = re.compile(
    r"^\s*(?:C(\d+))?([A-Za-z][A-Za-z0-9_]*)\s*(==|!=|<=|>=|<|>)\s*(\d+)\s*$"
)


class ConditionSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Condition:
    """One count comparison over a circuit's placements."""

    gate: str
    comparator: str
    count: int
    control_count: int | None = None  # None: any number of controls

    def __str__(self) -> str:
        prefix = f"C{self.control_count}" if self.control_count is not None else ""
        return f"{prefix}{self.gate} {self.comparator} {self.count}"

    def matches(self, placement: GatePlacement) -> bool:
        if placement.name != self.gate:
            return False
        if self.control_count is None:
            return True
        dots = len(placement.controls) + len(placement.anti_controls)
        return dots == self.control_count

    def evaluate(self, circuit: Circuit) -> bool:
        matching = sum(1 for p in circuit.placements if self.matches(p))
        return _COMPARATORS[self.comparator](matching, self.count)


def parse_condition(text: str) -> Condition:
    """Parse one condition string; raises ConditionSyntaxError otherwise."""
    if not isinstance(text, str):
        raise ConditionSyntaxError(f"condition must be a string, got {type(text).__name__}")
    match = _CONDITION_RE.match(text)
    if match is None:
        raise ConditionSyntaxError(f"cannot parse condition {text!r}")
    prefix, gate, comparator, count = match.groups()
    return Condition(
        gate=gate,
        comparator=comparator,
        count=int(count),
        control_count=int(prefix) if prefix is not None else None,
    )
