"""Two-input logic gate functions and gate sets.

Gates operate bitwise on truth-table rows packed into Python ints, so a
single application evaluates a gate on every input combination at once.
``mask`` is the all-ones word for the current table width; NAND and NOR
need it to keep complements inside the table.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import ValidationError


class GateFn(enum.Enum):
    """The five gate functions. Enum values double as LGP function indices."""

    AND = 1
    OR = 2
    NAND = 3
    NOR = 4
    XOR = 5

    @property
    def lgp_index(self) -> int:
        return self.value

    def __str__(self) -> str:
        return self.name


def apply_gate(fn: GateFn, a: int, b: int, mask: int) -> int:
    """Apply ``fn`` bitwise to two table rows of the width given by ``mask``."""
    if fn is GateFn.AND:
        return a & b
    if fn is GateFn.OR:
        return a | b
    if fn is GateFn.NAND:
        return ~(a & b) & mask
    if fn is GateFn.NOR:
        return ~(a | b) & mask
    if fn is GateFn.XOR:
        return a ^ b
    raise ValidationError(f"unknown gate function: {fn!r}")


@dataclass(frozen=True)
class GateSet:
    """An ordered collection of distinct gate functions."""

    functions: tuple[GateFn, ...]

    def __post_init__(self):
        if not self.functions:
            raise ValidationError("gate set must not be empty")
        if len(set(self.functions)) != len(self.functions):
            raise ValidationError("gate set contains duplicate functions")

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def __getitem__(self, i: int) -> GateFn:
        return self.functions[i]

    def index(self, fn: GateFn) -> int:
        return self.functions.index(fn)

    def by_lgp_index(self, idx: int) -> GateFn:
        """Resolve a 1-based function index into this set's ordering."""
        if not 1 <= idx <= len(self.functions):
            raise ValidationError(
                f"function index {idx} outside 1..{len(self.functions)}"
            )
        return self.functions[idx - 1]


FULL_GATE_SET = GateSet((GateFn.AND, GateFn.OR, GateFn.NAND, GateFn.NOR, GateFn.XOR))
NO_XOR_GATE_SET = GateSet((GateFn.AND, GateFn.OR, GateFn.NAND, GateFn.NOR))

_GATE_SETS_BY_NAME = {"full": FULL_GATE_SET, "no_xor": NO_XOR_GATE_SET}


def gate_set_by_name(name: str) -> GateSet:
    """Look up a preset gate set ('full' or 'no_xor')."""
    try:
        return _GATE_SETS_BY_NAME[name.lower().replace("-", "_")]
    except KeyError:
        raise ValidationError(f"unknown gate set {name!r}; use full or no_xor") from None


def gate_set_name(gs: GateSet) -> str:
    """Preset name for a gate set, or a dash-joined list of its functions."""
    for name, preset in _GATE_SETS_BY_NAME.items():
        if gs == preset:
            return name
    return "-".join(fn.name.lower() for fn in gs)
