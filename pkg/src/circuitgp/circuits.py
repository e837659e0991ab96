"""Circuit genotypes, truth-table phenotypes, and evaluation.

A phenotype is the full truth table of a single-output circuit, packed
into a Python int: bit p holds the output for the input combination whose
binary value is p, with input 1 contributing the most significant input
bit. Printed tables therefore list the all-ones combination first.

Two genotype representations map onto these phenotypes: a single-row
Cartesian grid (CGP) whose last gate is the output, and a linear register
program (LGP) whose output is register 1 after the final instruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import CircuitStructureError, ValidationError
from .gates import GateFn, GateSet, apply_gate

MAX_INPUTS = 7


def table_width(n_inputs: int) -> int:
    """Number of truth-table columns for ``n_inputs`` inputs."""
    if not 1 <= n_inputs <= MAX_INPUTS:
        raise ValidationError(
            f"n_inputs must be within 1..{MAX_INPUTS}, got {n_inputs}"
        )
    return 1 << n_inputs


def table_mask(n_inputs: int) -> int:
    return (1 << table_width(n_inputs)) - 1


def standard_contexts(n_inputs: int) -> tuple[int, ...]:
    """Truth-table rows presented to the circuit inputs.

    Row i is the projection of input i over all 2^n input combinations in
    descending binary order: alternating blocks of 2^(n-i) ones then zeros,
    starting with ones at the most significant end.
    """
    width = table_width(n_inputs)
    rows = []
    for i in range(1, n_inputs + 1):
        block = 1 << (n_inputs - i)
        row = 0
        # Walk columns left to right; column c is bit (width-1-c).
        for start in range(0, width, 2 * block):
            for c in range(start, start + block):
                row |= 1 << (width - 1 - c)
        rows.append(row)
    return tuple(rows)


def phenotype_digits(n_inputs: int) -> int:
    """Hex digits in the canonical text form of a phenotype."""
    return max(1, table_width(n_inputs) // 4)


def format_phenotype_bits(bits: int, n_inputs: int) -> str:
    return f"0x{bits:0{phenotype_digits(n_inputs)}x}"


@dataclass(frozen=True, order=True)
class Phenotype:
    """A packed truth table plus its input arity."""

    bits: int
    n_inputs: int

    def __post_init__(self):
        if not 0 <= self.bits <= table_mask(self.n_inputs):
            raise ValidationError(
                f"phenotype bits {self.bits:#x} out of range for "
                f"{self.n_inputs} inputs"
            )

    @classmethod
    def from_hex(cls, text: str, n_inputs: int) -> "Phenotype":
        try:
            bits = int(text, 16)
        except ValueError:
            raise ValidationError(f"not a hexadecimal phenotype: {text!r}") from None
        return cls(bits, n_inputs)

    @property
    def hex(self) -> str:
        return format_phenotype_bits(self.bits, self.n_inputs)

    def hamming(self, other: "Phenotype") -> int:
        if other.n_inputs != self.n_inputs:
            raise ValidationError("phenotypes have different input arities")
        return (self.bits ^ other.bits).bit_count()

    def __str__(self) -> str:
        return self.hex


def hamming_bits(a: int, b: int) -> int:
    return (a ^ b).bit_count()


class CgpNode(NamedTuple):
    fn: GateFn
    in1: int
    in2: int


class LgpInstruction(NamedTuple):
    fn_index: int
    out_reg: int
    in1: int
    in2: int


def cgp_input_floor(n_inputs: int, j: int, levels_back: int) -> int:
    """Lowest node index gate j may read.

    Inputs occupy column 0 of the grid and gate j column j, so gate j sees
    every input while j <= levels_back and otherwise only the preceding
    ``levels_back`` gates.
    """
    if j <= levels_back:
        return 1
    return n_inputs + j - levels_back


def cgp_input_range_size(n_inputs: int, j: int, levels_back: int) -> int:
    """Count of node indices legal as an input of gate j."""
    return n_inputs + j - 1 - cgp_input_floor(n_inputs, j, levels_back) + 1


def max_levels_back(n_inputs: int, n_gates: int) -> int:
    """Largest distinct levels-back value: any previous node is legal."""
    return n_gates + n_inputs - 1


@dataclass(frozen=True)
class CgpGenotype:
    """Single-row Cartesian circuit. Gate j occupies node index n_inputs+j."""

    n_inputs: int
    nodes: tuple[CgpNode, ...]
    levels_back: int

    def __post_init__(self):
        table_width(self.n_inputs)  # arity bounds check
        if not self.nodes:
            raise CircuitStructureError("a circuit needs at least one gate")
        if self.levels_back < 1:
            raise CircuitStructureError("levels_back must be >= 1")
        n = self.n_inputs
        for j, node in enumerate(self.nodes, start=1):
            if not isinstance(node.fn, GateFn):
                raise CircuitStructureError(f"gate {j}: not a gate function: {node.fn!r}")
            lo = cgp_input_floor(n, j, self.levels_back)
            hi = n + j - 1
            for src in (node.in1, node.in2):
                if not lo <= src <= hi:
                    raise CircuitStructureError(
                        f"gate {j} input {src} outside legal range {lo}..{hi}"
                    )

    @property
    def n_gates(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class LgpGenotype:
    """Linear register program.

    Registers 1..n_calc_registers are writable and start at zero; registers
    n_calc_registers+1 .. n_calc_registers+n_inputs hold the input context
    rows and are read-only.
    """

    n_inputs: int
    n_calc_registers: int
    instructions: tuple[LgpInstruction, ...]

    def __post_init__(self):
        table_width(self.n_inputs)
        if self.n_calc_registers < 1:
            raise CircuitStructureError("need at least one computational register")
        if not self.instructions:
            raise CircuitStructureError("a program needs at least one instruction")
        n_regs = self.n_calc_registers + self.n_inputs
        for j, ins in enumerate(self.instructions, start=1):
            if ins.fn_index < 1:
                raise CircuitStructureError(
                    f"instruction {j}: function index {ins.fn_index} < 1"
                )
            if not 1 <= ins.out_reg <= self.n_calc_registers:
                raise CircuitStructureError(
                    f"instruction {j}: output register {ins.out_reg} not writable"
                )
            for src in (ins.in1, ins.in2):
                if not 1 <= src <= n_regs:
                    raise CircuitStructureError(
                        f"instruction {j}: register {src} outside 1..{n_regs}"
                    )

    @property
    def n_instructions(self) -> int:
        return len(self.instructions)


Genotype = Union[CgpGenotype, LgpGenotype]


@dataclass(frozen=True)
class GateStateMatrix:
    """Per-gate truth-table rows produced while evaluating a genotype.

    Row j holds the state of gate j (CGP) or the value written by
    instruction j (LGP) over all input combinations.
    """

    rows: tuple[int, ...]
    n_inputs: int

    @property
    def n_gates(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return table_width(self.n_inputs)

    def submatrix(self, row_indices) -> tuple[int, ...]:
        return tuple(self.rows[i] for i in row_indices)


def cgp_gate_states(g: CgpGenotype, gs: GateSet) -> list[int]:
    """Evaluate every gate once, inputs first. Returns the gate rows."""
    n = g.n_inputs
    states = list(standard_contexts(n))
    mask = (1 << (1 << n)) - 1
    for node in g.nodes:
        states.append(apply_gate(node.fn, states[node.in1 - 1], states[node.in2 - 1], mask))
    return states[n:]


def _lgp_run(g: LgpGenotype, gs: GateSet) -> tuple[list[int], int]:
    """Run the program; returns per-instruction written values and final reg 1."""
    regs = [0] * g.n_calc_registers + list(standard_contexts(g.n_inputs))
    mask = (1 << (1 << g.n_inputs)) - 1
    rows = []
    for ins in g.instructions:
        fn = gs.by_lgp_index(ins.fn_index)
        value = apply_gate(fn, regs[ins.in1 - 1], regs[ins.in2 - 1], mask)
        regs[ins.out_reg - 1] = value
        rows.append(value)
    return rows, regs[0]


def lgp_register_trace(g: LgpGenotype, gs: GateSet) -> list[int]:
    """The value written by each instruction, in program order."""
    return _lgp_run(g, gs)[0]


def lgp_output_bits(g: LgpGenotype, gs: GateSet) -> int:
    """Phenotype bits only: register 1 after the last instruction."""
    return _lgp_run(g, gs)[1]


def cgp_output_bits(g: CgpGenotype, gs: GateSet) -> int:
    """Phenotype bits only: state of the last gate."""
    return cgp_gate_states(g, gs)[-1]


def evaluate_cgp(g: CgpGenotype, gs: GateSet) -> tuple[Phenotype, GateStateMatrix]:
    for node in g.nodes:
        if node.fn not in gs.functions:
            raise ValidationError(f"gate function {node.fn} not in the gate set")
    rows = cgp_gate_states(g, gs)
    return (
        Phenotype(rows[-1], g.n_inputs),
        GateStateMatrix(tuple(rows), g.n_inputs),
    )


def evaluate_lgp(g: LgpGenotype, gs: GateSet) -> tuple[Phenotype, GateStateMatrix]:
    for j, ins in enumerate(g.instructions, start=1):
        if ins.fn_index > len(gs):
            raise ValidationError(
                f"instruction {j}: function index {ins.fn_index} outside the gate set"
            )
    rows, out = _lgp_run(g, gs)
    return (
        Phenotype(out, g.n_inputs),
        GateStateMatrix(tuple(rows), g.n_inputs),
    )


def evaluate(g: Genotype, gs: GateSet) -> tuple[Phenotype, GateStateMatrix]:
    if isinstance(g, CgpGenotype):
        return evaluate_cgp(g, gs)
    if isinstance(g, LgpGenotype):
        return evaluate_lgp(g, gs)
    raise ValidationError(f"not a genotype: {g!r}")


def output_bits(g: Genotype, gs: GateSet) -> int:
    if isinstance(g, CgpGenotype):
        return cgp_output_bits(g, gs)
    return lgp_output_bits(g, gs)


def active_gate_rows(g: CgpGenotype) -> tuple[int, ...]:
    """0-based rows of gates reachable from the output gate."""
    n = g.n_inputs
    seen = set()
    stack = [n + g.n_gates]
    while stack:
        idx = stack.pop()
        if idx <= n or idx in seen:
            continue
        seen.add(idx)
        node = g.nodes[idx - n - 1]
        stack.append(node.in1)
        stack.append(node.in2)
    return tuple(sorted(idx - n - 1 for idx in seen))


def active_instruction_rows(g: LgpGenotype) -> tuple[int, ...]:
    """0-based rows of instructions whose result can reach register 1."""
    needed = {1}
    active = []
    for j in range(g.n_instructions - 1, -1, -1):
        ins = g.instructions[j]
        if ins.out_reg in needed:
            active.append(j)
            needed.discard(ins.out_reg)
            needed.add(ins.in1)
            needed.add(ins.in2)
    return tuple(reversed(active))
