"""Point mutation and exact neighborhood enumeration.

A locus is one mutable position of a genotype: a gate's function or one
of its input connections (CGP), or an instruction's function, output
register, or one of its operand registers (LGP). Loci whose legal range
holds a single value cannot change and are excluded from the mutable set.

Mutation draws a locus uniformly from the mutable set, then a new value
uniformly from the locus's legal alternatives excluding the current one,
consuming exactly two values from the stream.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .circuits import (
    CgpGenotype,
    Genotype,
    LgpGenotype,
    cgp_input_floor,
)
from .errors import CircuitStructureError, ValidationError
from .gates import GateSet


class MutationLocus(NamedTuple):
    node: int   # 1-based gate or instruction number
    field: str  # 'function', 'out_reg', 'in1' or 'in2'


class _LocusRange(NamedTuple):
    locus: MutationLocus
    lo: int    # smallest legal value (gate-set index 0 for functions)
    size: int  # count of legal values, always >= 2 here


def _locus_ranges(g: Genotype, gs: GateSet) -> list[_LocusRange]:
    k = len(gs)
    out: list[_LocusRange] = []
    if isinstance(g, CgpGenotype):
        n = g.n_inputs
        for j in range(1, g.n_gates + 1):
            if k > 1:
                out.append(_LocusRange(MutationLocus(j, "function"), 0, k))
            lo = cgp_input_floor(n, j, g.levels_back)
            size = n + j - 1 - lo + 1
            if size > 1:
                out.append(_LocusRange(MutationLocus(j, "in1"), lo, size))
                out.append(_LocusRange(MutationLocus(j, "in2"), lo, size))
        return out
    if isinstance(g, LgpGenotype):
        n_regs = g.n_calc_registers + g.n_inputs
        for j in range(1, g.n_instructions + 1):
            if k > 1:
                out.append(_LocusRange(MutationLocus(j, "function"), 1, k))
            if g.n_calc_registers > 1:
                out.append(_LocusRange(MutationLocus(j, "out_reg"), 1, g.n_calc_registers))
            if n_regs > 1:
                out.append(_LocusRange(MutationLocus(j, "in1"), 1, n_regs))
                out.append(_LocusRange(MutationLocus(j, "in2"), 1, n_regs))
        return out
    raise ValidationError(f"not a genotype: {g!r}")


def list_mutable_loci(g: Genotype, gs: GateSet) -> list[MutationLocus]:
    """The loci a point mutation may touch, in deterministic order."""
    return [entry.locus for entry in _locus_ranges(g, gs)]


def _current_value(g: Genotype, gs: GateSet, locus: MutationLocus) -> int:
    if isinstance(g, CgpGenotype):
        node = g.nodes[locus.node - 1]
        if locus.field == "function":
            return gs.index(node.fn)
        return getattr(node, locus.field)
    ins = g.instructions[locus.node - 1]
    if locus.field == "function":
        return ins.fn_index
    return getattr(ins, locus.field)


def _with_value(g: Genotype, gs: GateSet, locus: MutationLocus, value: int) -> Genotype:
    from dataclasses import replace

    if isinstance(g, CgpGenotype):
        node = g.nodes[locus.node - 1]
        if locus.field == "function":
            node = node._replace(fn=gs[value])
        else:
            node = node._replace(**{locus.field: value})
        nodes = g.nodes[: locus.node - 1] + (node,) + g.nodes[locus.node :]
        return replace(g, nodes=nodes)
    ins = g.instructions[locus.node - 1]
    if locus.field == "function":
        ins = ins._replace(fn_index=value)
    else:
        ins = ins._replace(**{locus.field: value})
    instructions = g.instructions[: locus.node - 1] + (ins,) + g.instructions[locus.node :]
    return replace(g, instructions=instructions)


def point_mutate(g: Genotype, gs: GateSet, rng: np.random.Generator) -> Genotype:
    """One uniform locus change; the result always differs from ``g``."""
    ranges = _locus_ranges(g, gs)
    if not ranges:
        raise CircuitStructureError("genotype has no mutable loci")
    entry = ranges[int(rng.integers(len(ranges)))]
    current = _current_value(g, gs, entry.locus)
    draw = entry.lo + int(rng.integers(entry.size - 1))
    if draw >= current:
        draw += 1
    return _with_value(g, gs, entry.locus, draw)


def enumerate_neighbors(g: Genotype, gs: GateSet) -> list[Genotype]:
    """All distinct single-locus variants of ``g``, each exactly once.

    Order is locus-major (gate by gate, function before in1 before in2)
    and value-minor (ascending legal values, current skipped).
    """
    out = []
    for entry in _locus_ranges(g, gs):
        current = _current_value(g, gs, entry.locus)
        for value in range(entry.lo, entry.lo + entry.size):
            if value != current:
                out.append(_with_value(g, gs, entry.locus, value))
    return out


def neighborhood_size(g: Genotype, gs: GateSet) -> int:
    """Number of exact one-mutation neighbors of ``g``."""
    return sum(entry.size - 1 for entry in _locus_ranges(g, gs))
