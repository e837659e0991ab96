"""Neutral walks and epochal evolution toward a target phenotype.

Both searches are (1+1) processes built on the point-mutation law: a
neutral walk accepts a mutant only when the phenotype is unchanged, while
epochal evolution also accepts mutants strictly closer to the target in
Hamming distance, so the distance at phenotype transitions only falls.

The epochal loop runs millions of mutate-evaluate steps in the larger
experiments, so it works on flat arrays internally instead of rebuilding
genotype objects per step. The observable behavior matches point_mutate:
one locus draw plus one value draw per step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .circuits import (
    CgpGenotype,
    CgpNode,
    Genotype,
    LgpGenotype,
    LgpInstruction,
    Phenotype,
    output_bits,
    standard_contexts,
)
from .errors import ValidationError
from .gates import GateFn, GateSet
from .mutation import _locus_ranges, point_mutate
from .params import ChromosomeParams, random_genotype


def default_max_steps(n_inputs: int) -> int:
    """Step budget scaling used by the experiments."""
    return 200_000 if n_inputs <= 3 else 1_000_000


@dataclass(frozen=True)
class WalkResult:
    final_genotype: Genotype
    steps_taken: int
    accepted_steps: int
    trace: tuple[Genotype, ...] | None = None
    # accepted/rejected flag for step 1..steps_taken, kept only with a trace
    acceptance_log: tuple[bool, ...] | None = None


def neutral_walk(
    g0: Genotype,
    gs: GateSet,
    max_steps: int,
    rng: np.random.Generator,
    *,
    record_trace: bool = False,
) -> WalkResult:
    """Run exactly ``max_steps`` point mutations, keeping the phenotype fixed."""
    if max_steps < 0:
        raise ValidationError("max_steps must be >= 0")
    p0 = output_bits(g0, gs)
    current = g0
    accepted = 0
    trace = [g0] if record_trace else None
    log = [] if record_trace else None
    for _ in range(max_steps):
        mutant = point_mutate(current, gs, rng)
        ok = output_bits(mutant, gs) == p0
        if ok:
            current = mutant
            accepted += 1
            if trace is not None:
                trace.append(mutant)
        if log is not None:
            log.append(ok)
    return WalkResult(
        final_genotype=current,
        steps_taken=max_steps,
        accepted_steps=accepted,
        trace=tuple(trace) if trace is not None else None,
        acceptance_log=tuple(log) if log is not None else None,
    )


class EpochalOutcome(enum.Enum):
    FOUND = "found"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class EpochalResult:
    outcome: EpochalOutcome
    final_genotype: Genotype
    steps_taken: int
    # (step, Hamming distance to target, phenotype bits) at the start and at
    # every accepted phenotype transition.
    distance_trace: tuple[tuple[int, int, int], ...] | None = None


_AND, _OR, _NAND, _NOR, _XOR = (
    GateFn.AND, GateFn.OR, GateFn.NAND, GateFn.NOR, GateFn.XOR,
)


def _op_code(fn: GateFn) -> int:
    return fn.value  # 1..5 in gate order


def epochal_evolve(
    target: Phenotype,
    params: ChromosomeParams,
    max_steps: int,
    rng: np.random.Generator,
    *,
    record_trace: bool = False,
) -> EpochalResult:
    """Evolve a random start toward ``target``; accept neutral or closer mutants.

    Stops as soon as the current genotype maps to the target (checked for
    the initial genotype too, giving steps_taken = 0) or when ``max_steps``
    mutations have been tried.
    """
    if target.n_inputs != params.n_inputs:
        raise ValidationError("target arity differs from params")
    if max_steps < 0:
        raise ValidationError("max_steps must be >= 0")

    gs = params.gate_set
    g = random_genotype(params, rng)
    if params.is_cgp:
        return _epochal_cgp(target.bits, g, gs, max_steps, rng, record_trace)
    return _epochal_lgp(target.bits, g, gs, max_steps, rng, record_trace)


def _epochal_cgp(target_bits, g, gs, max_steps, rng, record_trace):
    n = g.n_inputs
    n_gates = g.n_gates
    mask = (1 << (1 << n)) - 1
    contexts = standard_contexts(n)

    # Flat working copy: gate-set index plus the two connections per gate.
    fn_idx = [gs.index(node.fn) for node in g.nodes]
    conns = [[node.in1 for node in g.nodes], [node.in2 for node in g.nodes]]
    op_of = tuple(_op_code(fn) for fn in gs)
    ops = [op_of[i] for i in fn_idx]
    loci = _locus_ranges(g, gs)
    n_loci = len(loci)
    states = list(contexts) + [0] * n_gates

    def eval_bits() -> int:
        for j in range(n_gates):
            a = states[conns[0][j] - 1]
            b = states[conns[1][j] - 1]
            op = ops[j]
            if op == 1:
                v = a & b
            elif op == 2:
                v = a | b
            elif op == 3:
                v = ~(a & b) & mask
            elif op == 4:
                v = ~(a | b) & mask
            else:
                v = a ^ b
            states[n + j] = v
        return states[-1]

    cur_bits = eval_bits()
    cur_dist = (cur_bits ^ target_bits).bit_count()
    trace = [(0, cur_dist, cur_bits)] if record_trace else None
    steps = 0
    integers = rng.integers

    while cur_dist > 0 and steps < max_steps:
        steps += 1
        locus, lo, size = loci[int(integers(n_loci))]
        draw = lo + int(integers(size - 1))
        j = locus.node - 1
        if locus.field == "function":
            old = fn_idx[j]
            if draw >= old:
                draw += 1
            fn_idx[j] = draw
            ops[j] = op_of[draw]
        else:
            slot = 0 if locus.field == "in1" else 1
            old = conns[slot][j]
            if draw >= old:
                draw += 1
            conns[slot][j] = draw

        bits = eval_bits()
        if bits == cur_bits:
            continue  # neutral move accepted, nothing else changes
        dist = (bits ^ target_bits).bit_count()
        if dist < cur_dist:
            cur_bits, cur_dist = bits, dist
            if trace is not None:
                trace.append((steps, dist, bits))
        else:
            # revert the locus
            if locus.field == "function":
                fn_idx[j] = old
                ops[j] = op_of[old]
            else:
                conns[slot][j] = old

    nodes = tuple(
        CgpNode(gs[fn_idx[j]], conns[0][j], conns[1][j]) for j in range(n_gates)
    )
    final = CgpGenotype(n_inputs=n, nodes=nodes, levels_back=g.levels_back)
    outcome = EpochalOutcome.FOUND if cur_dist == 0 else EpochalOutcome.STEP_LIMIT
    return EpochalResult(
        outcome=outcome,
        final_genotype=final,
        steps_taken=steps,
        distance_trace=tuple(trace) if trace is not None else None,
    )


def _epochal_lgp(target_bits, g, gs, max_steps, rng, record_trace):
    n = g.n_inputs
    n_calc = g.n_calc_registers
    n_ins = g.n_instructions
    mask = (1 << (1 << n)) - 1
    contexts = standard_contexts(n)

    fields = [list(col) for col in zip(*g.instructions)]  # fn, out, in1, in2
    op_of = tuple(_op_code(fn) for fn in gs)
    loci = _locus_ranges(g, gs)
    n_loci = len(loci)
    init_regs = [0] * n_calc + list(contexts)
    regs = list(init_regs)

    def eval_bits() -> int:
        regs[:n_calc] = [0] * n_calc
        fn_col, out_col, in1_col, in2_col = fields
        for j in range(n_ins):
            a = regs[in1_col[j] - 1]
            b = regs[in2_col[j] - 1]
            op = op_of[fn_col[j] - 1]
            if op == 1:
                v = a & b
            elif op == 2:
                v = a | b
            elif op == 3:
                v = ~(a & b) & mask
            elif op == 4:
                v = ~(a | b) & mask
            else:
                v = a ^ b
            regs[out_col[j] - 1] = v
        return regs[0]

    _FIELD_COL = {"function": 0, "out_reg": 1, "in1": 2, "in2": 3}
    cur_bits = eval_bits()
    cur_dist = (cur_bits ^ target_bits).bit_count()
    trace = [(0, cur_dist, cur_bits)] if record_trace else None
    steps = 0
    integers = rng.integers

    while cur_dist > 0 and steps < max_steps:
        steps += 1
        locus, lo, size = loci[int(integers(n_loci))]
        draw = lo + int(integers(size - 1))
        col = _FIELD_COL[locus.field]
        j = locus.node - 1
        old = fields[col][j]
        if draw >= old:
            draw += 1
        fields[col][j] = draw

        bits = eval_bits()
        if bits == cur_bits:
            continue
        dist = (bits ^ target_bits).bit_count()
        if dist < cur_dist:
            cur_bits, cur_dist = bits, dist
            if trace is not None:
                trace.append((steps, dist, bits))
        else:
            fields[col][j] = old

    instructions = tuple(LgpInstruction(*row) for row in zip(*fields))
    final = LgpGenotype(n_inputs=n, n_calc_registers=n_calc, instructions=instructions)
    outcome = EpochalOutcome.FOUND if cur_dist == 0 else EpochalOutcome.STEP_LIMIT
    return EpochalResult(
        outcome=outcome,
        final_genotype=final,
        steps_taken=steps,
        distance_trace=tuple(trace) if trace is not None else None,
    )
