"""Chromosome shape parameters, presets, and seeded genotype generation.

All randomness flows through numpy PCG64 generators. ``split_stream``
derives independent child streams from a 64-bit master seed and an
integer key path, so distributed runs can hand each shard its own stream
without any shared state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import (
    CgpGenotype,
    CgpNode,
    Genotype,
    LgpGenotype,
    LgpInstruction,
    cgp_input_floor,
    cgp_input_range_size,
    max_levels_back,
    table_width,
)
from .errors import ValidationError
from .gates import FULL_GATE_SET, GateSet, gate_set_name

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ChromosomeParams:
    """Shape of one genotype space.

    CGP uses ``n_gates`` and ``levels_back`` (clamped to the widest legal
    value, n_gates + n_inputs - 1); LGP uses ``n_instructions`` and
    ``n_calc_registers`` (default 2).
    """

    repr_name: str
    n_inputs: int
    n_gates: int | None = None
    levels_back: int | None = None
    n_instructions: int | None = None
    n_calc_registers: int | None = None
    gate_set: GateSet = field(default=FULL_GATE_SET)

    def __post_init__(self):
        table_width(self.n_inputs)
        if self.repr_name == "cgp":
            if self.n_gates is None or self.n_gates < 1:
                raise ValidationError("cgp params need n_gates >= 1")
            if self.n_instructions is not None or self.n_calc_registers is not None:
                raise ValidationError("register fields are not cgp params")
            lb = self.levels_back
            if lb is None:
                lb = max_levels_back(self.n_inputs, self.n_gates)
            if lb < 1:
                raise ValidationError("levels_back must be >= 1")
            lb = min(lb, max_levels_back(self.n_inputs, self.n_gates))
            object.__setattr__(self, "levels_back", lb)
        elif self.repr_name == "lgp":
            if self.n_instructions is None or self.n_instructions < 1:
                raise ValidationError("lgp params need n_instructions >= 1")
            if self.n_gates is not None or self.levels_back is not None:
                raise ValidationError("grid fields are not lgp params")
            n_calc = self.n_calc_registers
            if n_calc is None:
                n_calc = 2
            if n_calc < 1:
                raise ValidationError("n_calc_registers must be >= 1")
            object.__setattr__(self, "n_calc_registers", n_calc)
        else:
            raise ValidationError(
                f"unknown representation {self.repr_name!r}; use cgp or lgp"
            )

    @property
    def is_cgp(self) -> bool:
        return self.repr_name == "cgp"

    @property
    def n_nodes(self) -> int:
        """Gate count (CGP) or instruction count (LGP)."""
        return self.n_gates if self.is_cgp else self.n_instructions

    @property
    def n_registers(self) -> int:
        if self.is_cgp:
            raise ValidationError("cgp params have no registers")
        return self.n_calc_registers + self.n_inputs

    def space_size(self) -> int:
        """Exact number of genotypes in this space."""
        k = len(self.gate_set)
        if self.is_cgp:
            total = 1
            for j in range(1, self.n_gates + 1):
                r = cgp_input_range_size(self.n_inputs, j, self.levels_back)
                total *= k * r * r
            return total
        per = k * self.n_calc_registers * self.n_registers**2
        return per**self.n_instructions

    def describe(self) -> dict:
        """JSON-friendly summary used in config hashes and CSV headers."""
        out = {"repr": self.repr_name, "n_inputs": self.n_inputs,
               "gate_set": gate_set_name(self.gate_set)}
        if self.is_cgp:
            out.update(n_gates=self.n_gates, levels_back=self.levels_back)
        else:
            out.update(n_instructions=self.n_instructions,
                       n_calc_registers=self.n_calc_registers)
        return out


def cgp_params(n_inputs: int, n_gates: int, levels_back: int | None = None,
               gate_set: GateSet = FULL_GATE_SET) -> ChromosomeParams:
    return ChromosomeParams("cgp", n_inputs, n_gates=n_gates,
                            levels_back=levels_back, gate_set=gate_set)


def lgp_params(n_inputs: int, n_instructions: int, n_calc_registers: int = 2,
               gate_set: GateSet = FULL_GATE_SET) -> ChromosomeParams:
    return ChromosomeParams("lgp", n_inputs, n_instructions=n_instructions,
                            n_calc_registers=n_calc_registers, gate_set=gate_set)


# Reference scales used throughout the four-input experiments.
CGP_4IN = cgp_params(4, 11, 8)
LGP_4IN = lgp_params(4, 10, 2)

PRESETS = {"cgp_4in": CGP_4IN, "lgp_4in": LGP_4IN}


def _seed_key_words(parts: tuple[int, ...]) -> tuple[int, ...]:
    """Flatten arbitrary non-negative ints into unambiguous uint32 words."""
    words: list[int] = []
    for p in parts:
        if p < 0:
            raise ValidationError("stream key parts must be non-negative")
        limbs = []
        while True:
            limbs.append(p & 0xFFFFFFFF)
            p >>= 32
            if p == 0:
                break
        words.append(len(limbs))
        words.extend(limbs)
    return tuple(words)


def split_stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent child generator for a key path under a master seed."""
    if not 0 <= master_seed <= MAX_SEED:
        raise ValidationError(f"master seed must be a 64-bit value, got {master_seed}")
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=_seed_key_words(key))
    return np.random.Generator(np.random.PCG64(seq))


def random_genotype(params: ChromosomeParams, rng: np.random.Generator) -> Genotype:
    """Uniform draw from the genotype space described by ``params``.

    Per gate the draw order is function, first input, second input, so a
    fixed stream yields a fixed genotype.
    """
    gs = params.gate_set
    k = len(gs)
    n = params.n_inputs
    if params.is_cgp:
        lb = params.levels_back
        nodes = []
        for j in range(1, params.n_gates + 1):
            fn = gs[int(rng.integers(k))]
            lo = cgp_input_floor(n, j, lb)
            hi = n + j - 1
            in1 = int(rng.integers(lo, hi + 1))
            in2 = int(rng.integers(lo, hi + 1))
            nodes.append(CgpNode(fn, in1, in2))
        return CgpGenotype(n_inputs=n, nodes=tuple(nodes), levels_back=lb)
    n_regs = params.n_registers
    instructions = []
    for _ in range(params.n_instructions):
        fn_index = 1 + int(rng.integers(k))
        out_reg = 1 + int(rng.integers(params.n_calc_registers))
        in1 = 1 + int(rng.integers(n_regs))
        in2 = 1 + int(rng.integers(n_regs))
        instructions.append(LgpInstruction(fn_index, out_reg, in1, in2))
    return LgpGenotype(
        n_inputs=n,
        n_calc_registers=params.n_calc_registers,
        instructions=tuple(instructions),
    )
