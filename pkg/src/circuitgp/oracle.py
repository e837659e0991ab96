"""Exhaustive enumeration oracle for small genotype spaces.

Genotypes are indexed by a mixed-radix number whose digits are, gate by
gate (gate 1 most significant), the function choice and the two input
choices; LGP adds the output register digit. Enumeration order is exactly
ascending flat index, so streamed results, partitioned results, and
vectorized sweeps all agree element for element.

``exact_map_summary`` walks the whole space once for redundancy and once
more over each genotype's exact neighborhood for robustness, evolvability
and (optionally) neutral-network component counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .circuits import (
    CgpGenotype,
    CgpNode,
    Genotype,
    LgpGenotype,
    LgpInstruction,
    cgp_input_floor,
    output_bits,
    table_width,
)
from .errors import ResourceLimitError, ValidationError
from .mutation import (
    MutationLocus,
    _current_value,
    _locus_ranges,
    enumerate_neighbors,
    neighborhood_size,
)
from .params import ChromosomeParams

DEFAULT_ENUMERATION_CAP = 10**8


@dataclass(frozen=True)
class EnumerationSpec:
    """A genotype space plus the size cap enumeration refuses to exceed."""

    params: ChromosomeParams
    cap: int = DEFAULT_ENUMERATION_CAP

    @property
    def predicted_space_size(self) -> int:
        return self.params.space_size()

    def check_cap(self) -> int:
        size = self.predicted_space_size
        if size > self.cap:
            raise ResourceLimitError(
                f"space holds {size} genotypes, above the cap of {self.cap}"
            )
        return size


def space_radices(params: ChromosomeParams) -> list[tuple[int, ...]]:
    """Digit sizes per node, most significant node first."""
    k = len(params.gate_set)
    if params.is_cgp:
        out = []
        for j in range(1, params.n_gates + 1):
            lo = cgp_input_floor(params.n_inputs, j, params.levels_back)
            r = params.n_inputs + j - 1 - lo + 1
            out.append((k, r, r))
        return out
    n_regs = params.n_registers
    return [(k, params.n_calc_registers, n_regs, n_regs)] * params.n_instructions


def _node_choices(params: ChromosomeParams) -> list[list]:
    gs = params.gate_set
    if params.is_cgp:
        per_gate = []
        for j in range(1, params.n_gates + 1):
            lo = cgp_input_floor(params.n_inputs, j, params.levels_back)
            hi = params.n_inputs + j - 1
            per_gate.append([
                CgpNode(fn, in1, in2)
                for fn in gs
                for in1 in range(lo, hi + 1)
                for in2 in range(lo, hi + 1)
            ])
        return per_gate
    regs = range(1, params.n_registers + 1)
    per_ins = [
        LgpInstruction(f, out, in1, in2)
        for f in range(1, len(gs) + 1)
        for out in range(1, params.n_calc_registers + 1)
        for in1 in regs
        for in2 in regs
    ]
    return [per_ins] * params.n_instructions


def enumerate_space(spec: EnumerationSpec):
    """Stream every genotype of the space in ascending flat-index order."""
    spec.check_cap()
    params = spec.params
    choices = _node_choices(params)
    if params.is_cgp:
        for nodes in itertools.product(*choices):
            yield CgpGenotype(
                n_inputs=params.n_inputs,
                nodes=nodes,
                levels_back=params.levels_back,
            )
    else:
        for instructions in itertools.product(*choices):
            yield LgpGenotype(
                n_inputs=params.n_inputs,
                n_calc_registers=params.n_calc_registers,
                instructions=instructions,
            )


def flat_index(params: ChromosomeParams, g: Genotype) -> int:
    """Position of ``g`` in enumeration order."""
    gs = params.gate_set
    idx = 0
    if params.is_cgp:
        for j, node in enumerate(g.nodes, start=1):
            lo = cgp_input_floor(params.n_inputs, j, params.levels_back)
            r = params.n_inputs + j - 1 - lo + 1
            digit = (gs.index(node.fn) * r + (node.in1 - lo)) * r + (node.in2 - lo)
            idx = idx * (len(gs) * r * r) + digit
        return idx
    n_regs = params.n_registers
    n_calc = params.n_calc_registers
    per = len(gs) * n_calc * n_regs * n_regs
    for ins in g.instructions:
        digit = (
            ((ins.fn_index - 1) * n_calc + (ins.out_reg - 1)) * n_regs
            + (ins.in1 - 1)
        ) * n_regs + (ins.in2 - 1)
        idx = idx * per + digit
    return idx


def genotype_at(params: ChromosomeParams, flat: int) -> Genotype:
    """Inverse of flat_index."""
    gs = params.gate_set
    k = len(gs)
    if params.is_cgp:
        digits = []
        for j in range(params.n_gates, 0, -1):
            lo = cgp_input_floor(params.n_inputs, j, params.levels_back)
            r = params.n_inputs + j - 1 - lo + 1
            flat, digit = divmod(flat, k * r * r)
            fn_in1, in2 = divmod(digit, r)
            fn, in1 = divmod(fn_in1, r)
            digits.append(CgpNode(gs[fn], lo + in1, lo + in2))
        if flat:
            raise ValidationError("flat index outside the space")
        return CgpGenotype(
            n_inputs=params.n_inputs,
            nodes=tuple(reversed(digits)),
            levels_back=params.levels_back,
        )
    n_regs = params.n_registers
    n_calc = params.n_calc_registers
    per = k * n_calc * n_regs * n_regs
    instructions = []
    for _ in range(params.n_instructions):
        flat, digit = divmod(flat, per)
        rest, in2 = divmod(digit, n_regs)
        rest, in1 = divmod(rest, n_regs)
        fn, out = divmod(rest, n_calc)
        instructions.append(LgpInstruction(fn + 1, out + 1, in1 + 1, in2 + 1))
    if flat:
        raise ValidationError("flat index outside the space")
    return LgpGenotype(
        n_inputs=params.n_inputs,
        n_calc_registers=params.n_calc_registers,
        instructions=tuple(reversed(instructions)),
    )


@dataclass(frozen=True)
class ExactMapSummary:
    """Exact per-phenotype statistics for a fully enumerated space."""

    params: ChromosomeParams
    space_size: int
    counts: dict[int, int]            # phenotype bits -> genotype count
    robustness: dict[int, float]      # represented phenotypes only
    evolvability: dict[int, int]      # represented phenotypes only
    neutral_components: dict[int, int] | None = None

    def frequency(self, bits: int) -> float:
        return self.counts.get(bits, 0) / self.space_size


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def exact_map_summary(
    spec: EnumerationSpec,
    *,
    components: bool = False,
    workers: int = 1,
) -> ExactMapSummary:
    """Enumerate the space and report exact redundancy, robustness and
    evolvability per phenotype (optionally neutral-component counts).

    ``workers`` partitions the space by leading-node assignment; partial
    accumulators merge exactly, so the result is worker-count independent.
    """
    size = spec.check_cap()
    params = spec.params
    if workers > 1:
        accs = [
            _summarize_range(params, lo, hi)
            for lo, hi in _leading_node_ranges(params, size, workers)
        ]
        acc = _merge_accumulators(accs)
    else:
        acc = _summarize_range(params, 0, size)
    counts, neutral_sum, evo_sets = acc

    n = params.n_inputs
    if table_width(n) <= 16:
        full = {bits: 0 for bits in range(1 << table_width(n))}
        full.update(counts)
        counts = full

    # every genotype of a space has the same mutation degree, so the mean
    # neutral fraction reduces to one exact integer ratio per phenotype
    degree = neighborhood_size(genotype_at(params, 0), params.gate_set)
    robustness = {
        bits: (neutral_sum[bits] / (counts[bits] * degree) if degree else 0.0)
        for bits in neutral_sum
        if counts[bits]
    }
    evolvability = {bits: len(s) for bits, s in evo_sets.items()}

    neutral_components = _component_counts(params, size) if components else None
    return ExactMapSummary(
        params=params,
        space_size=size,
        counts=counts,
        robustness=robustness,
        evolvability=evolvability,
        neutral_components=neutral_components,
    )


def _leading_node_ranges(params, size: int, workers: int):
    """Contiguous flat ranges split on the first node's digit."""
    radix = space_radices(params)[0]
    lead = 1
    for r in radix:
        lead *= r
    stride = size // lead
    bounds = []
    per = max(1, lead // workers)
    start_digit = 0
    while start_digit < lead:
        stop_digit = min(lead, start_digit + per)
        bounds.append((start_digit * stride, stop_digit * stride))
        start_digit = stop_digit
    return bounds


def _summarize_range(params, lo: int, hi: int):
    gs = params.gate_set
    counts: dict[int, int] = {}
    neutral_sum: dict[int, int] = {}
    evo_sets: dict[int, set[int]] = {}
    for flat in range(lo, hi):
        g = genotype_at(params, flat)
        bits = output_bits(g, gs)
        counts[bits] = counts.get(bits, 0) + 1
        nb_bits = [output_bits(nb, gs) for nb in enumerate_neighbors(g, gs)]
        neutral_sum[bits] = neutral_sum.get(bits, 0) + sum(
            1 for b in nb_bits if b == bits
        )
        bucket = evo_sets.setdefault(bits, set())
        bucket.update(b for b in nb_bits if b != bits)
    return counts, neutral_sum, evo_sets


def _merge_accumulators(accs):
    counts: dict[int, int] = {}
    neutral_sum: dict[int, int] = {}
    evo_sets: dict[int, set[int]] = {}
    for c, r, e in accs:
        for bits, v in c.items():
            counts[bits] = counts.get(bits, 0) + v
        for bits, v in r.items():
            neutral_sum[bits] = neutral_sum.get(bits, 0) + v
        for bits, s in e.items():
            evo_sets.setdefault(bits, set()).update(s)
    return counts, neutral_sum, evo_sets


def _locus_places(params: ChromosomeParams) -> dict[MutationLocus, int]:
    """Flat-index weight of a unit change at each locus."""
    radices = space_radices(params)
    group_sizes = []
    for radix in radices:
        total = 1
        for r in radix:
            total *= r
        group_sizes.append(total)
    places: dict[MutationLocus, int] = {}
    tail = 1
    for j in range(len(radices), 0, -1):
        radix = radices[j - 1]
        # Digit order within a node matches flat_index: fn (, out), in1, in2.
        fields = ("function", "in1", "in2") if params.is_cgp else (
            "function", "out_reg", "in1", "in2")
        weight = tail
        for field, r in zip(reversed(fields), reversed(radix)):
            places[MutationLocus(j, field)] = weight
            weight *= r
        tail *= group_sizes[j - 1]
    return places


def _neighbor_flat_indices(params, g: Genotype, flat: int, places):
    """Flat indices of every exact neighbor of ``g``."""
    gs = params.gate_set
    for entry in _locus_ranges(g, gs):
        cur = _current_value(g, gs, entry.locus)
        place = places[entry.locus]
        for value in range(entry.lo, entry.lo + entry.size):
            if value != cur:
                yield flat + (value - cur) * place


def _component_counts(params, size: int) -> dict[int, int]:
    """Connected components of each neutral network under point mutation."""
    gs = params.gate_set
    phen = [0] * size
    for flat in range(size):
        phen[flat] = output_bits(genotype_at(params, flat), gs)
    places = _locus_places(params)
    uf = _UnionFind(size)
    for flat in range(size):
        g = genotype_at(params, flat)
        for nb_flat in _neighbor_flat_indices(params, g, flat, places):
            if nb_flat > flat and phen[nb_flat] == phen[flat]:
                uf.union(flat, nb_flat)
    roots: dict[int, set[int]] = {}
    for flat in range(size):
        roots.setdefault(phen[flat], set()).add(uf.find(flat))
    return {bits: len(r) for bits, r in roots.items()}
