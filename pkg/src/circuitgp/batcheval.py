"""Vectorized batch evaluation of genotype populations.

Truth tables with up to 64 columns (6 inputs) fit one uint64 lane, so a
whole batch of genotypes evaluates with a handful of array operations per
gate. Results are bit-identical to the scalar evaluator; tests pin the
agreement. Batches follow a fixed draw order (per node: function, output
register for LGP, then the two inputs, each a full-batch draw), so a
fixed stream yields a fixed batch regardless of batch internals.
"""

from __future__ import annotations

import numpy as np

from .circuits import (
    CgpGenotype,
    CgpNode,
    Genotype,
    LgpGenotype,
    LgpInstruction,
    cgp_input_floor,
    standard_contexts,
    table_width,
)
from .errors import ValidationError
from .gates import GateFn
from .params import ChromosomeParams

DEFAULT_BATCH = 1 << 16


def supports(params: ChromosomeParams) -> bool:
    """Whether this space fits the uint64 fast path."""
    return table_width(params.n_inputs) <= 64


def _word_mask(n_inputs: int) -> np.uint64:
    width = table_width(n_inputs)
    if width == 64:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << width) - 1)


def _vec_apply(fn: GateFn, a: np.ndarray, b: np.ndarray, mask: np.uint64) -> np.ndarray:
    if fn is GateFn.AND:
        return a & b
    if fn is GateFn.OR:
        return a | b
    if fn is GateFn.NAND:
        return (a & b) ^ mask
    if fn is GateFn.NOR:
        return (a | b) ^ mask
    return a ^ b


def _select_by_code(gs, code: np.ndarray, a: np.ndarray, b: np.ndarray,
                    mask: np.uint64) -> np.ndarray:
    results = np.stack([_vec_apply(fn, a, b, mask) for fn in gs])
    return results[code, np.arange(len(code))]


def _eval_cgp_columns(params: ChromosomeParams, columns: list[dict]) -> np.ndarray:
    """Evaluate a batch given per-gate field arrays; returns phenotype bits."""
    n = params.n_inputs
    m = params.n_gates
    batch = len(columns[0]["fn"])
    mask = _word_mask(n)
    states = np.empty((batch, n + m), dtype=np.uint64)
    for i, ctx in enumerate(standard_contexts(n)):
        states[:, i] = ctx
    flat = states.reshape(-1)
    offsets = np.arange(batch, dtype=np.int64) * (n + m)
    for j in range(m):
        col = columns[j]
        a = flat[offsets + (col["in1"] - 1)]
        b = flat[offsets + (col["in2"] - 1)]
        states[:, n + j] = _select_by_code(params.gate_set, col["fn"], a, b, mask)
    return states[:, -1].copy()


def _eval_lgp_columns(params: ChromosomeParams, columns: list[dict]) -> np.ndarray:
    n = params.n_inputs
    n_calc = params.n_calc_registers
    batch = len(columns[0]["fn"])
    mask = _word_mask(n)
    regs = np.zeros((batch, n_calc + n), dtype=np.uint64)
    for i, ctx in enumerate(standard_contexts(n)):
        regs[:, n_calc + i] = ctx
    flat = regs.reshape(-1)
    offsets = np.arange(batch, dtype=np.int64) * (n_calc + n)
    for col in columns:
        a = flat[offsets + (col["in1"] - 1)]
        b = flat[offsets + (col["in2"] - 1)]
        value = _select_by_code(params.gate_set, col["fn"], a, b, mask)
        flat[offsets + (col["out"] - 1)] = value
    return regs[:, 0].copy()


def random_genotype_columns(params: ChromosomeParams, count: int,
                            rng: np.random.Generator) -> list[dict]:
    """Uniform field draws for ``count`` genotypes, one dict per node."""
    k = len(params.gate_set)
    n = params.n_inputs
    columns = []
    if params.is_cgp:
        for j in range(1, params.n_gates + 1):
            lo = cgp_input_floor(n, j, params.levels_back)
            hi = n + j - 1
            columns.append({
                "fn": rng.integers(0, k, size=count, dtype=np.int64),
                "in1": rng.integers(lo, hi + 1, size=count, dtype=np.int64),
                "in2": rng.integers(lo, hi + 1, size=count, dtype=np.int64),
            })
        return columns
    n_regs = params.n_registers
    for _ in range(params.n_instructions):
        columns.append({
            "fn": rng.integers(0, k, size=count, dtype=np.int64),
            "out": rng.integers(1, params.n_calc_registers + 1, size=count, dtype=np.int64),
            "in1": rng.integers(1, n_regs + 1, size=count, dtype=np.int64),
            "in2": rng.integers(1, n_regs + 1, size=count, dtype=np.int64),
        })
    return columns


def evaluate_columns(params: ChromosomeParams, columns: list[dict]) -> np.ndarray:
    if not supports(params):
        raise ValidationError("batch evaluation supports up to 6 inputs")
    if params.is_cgp:
        return _eval_cgp_columns(params, columns)
    return _eval_lgp_columns(params, columns)


def genotype_from_columns(params: ChromosomeParams, columns: list[dict],
                          row: int) -> Genotype:
    """Materialize one row of a batch as a genotype object."""
    gs = params.gate_set
    if params.is_cgp:
        nodes = tuple(
            CgpNode(gs[int(col["fn"][row])], int(col["in1"][row]), int(col["in2"][row]))
            for col in columns
        )
        return CgpGenotype(params.n_inputs, nodes, params.levels_back)
    instructions = tuple(
        LgpInstruction(int(col["fn"][row]) + 1, int(col["out"][row]),
                       int(col["in1"][row]), int(col["in2"][row]))
        for col in columns
    )
    return LgpGenotype(params.n_inputs, params.n_calc_registers, instructions)


def enumerated_columns(params: ChromosomeParams, start: int, stop: int) -> list[dict]:
    """Decode the flat-index range [start, stop) into field arrays."""
    k = len(params.gate_set)
    n = params.n_inputs
    rem = np.arange(start, stop, dtype=np.uint64)
    columns: list[dict] = []
    if params.is_cgp:
        for j in range(params.n_gates, 0, -1):
            lo = cgp_input_floor(n, j, params.levels_back)
            r = np.uint64(n + j - 1 - lo + 1)
            rem, in2 = np.divmod(rem, r)
            rem, in1 = np.divmod(rem, r)
            rem, fn = np.divmod(rem, np.uint64(k))
            columns.append({
                "fn": fn.astype(np.int64),
                "in1": in1.astype(np.int64) + lo,
                "in2": in2.astype(np.int64) + lo,
            })
        columns.reverse()
        return columns
    n_regs = np.uint64(params.n_registers)
    n_calc = np.uint64(params.n_calc_registers)
    for _ in range(params.n_instructions):
        rem, in2 = np.divmod(rem, n_regs)
        rem, in1 = np.divmod(rem, n_regs)
        rem, out = np.divmod(rem, n_calc)
        rem, fn = np.divmod(rem, np.uint64(k))
        columns.append({
            "fn": fn.astype(np.int64),
            "out": out.astype(np.int64) + 1,
            "in1": in1.astype(np.int64) + 1,
            "in2": in2.astype(np.int64) + 1,
        })
    columns.reverse()
    return columns


def random_phenotype_bits(params: ChromosomeParams, count: int,
                          rng: np.random.Generator) -> np.ndarray:
    return evaluate_columns(params, random_genotype_columns(params, count, rng))


def sample_phenotype_counts(params: ChromosomeParams, n_samples: int,
                            rng: np.random.Generator,
                            batch_size: int = DEFAULT_BATCH) -> dict[int, int]:
    """Phenotype histogram over uniform genotype draws."""
    width = table_width(params.n_inputs)
    use_bincount = width <= 16
    acc = np.zeros(1 << width, dtype=np.int64) if use_bincount else None
    extra: dict[int, int] = {}
    done = 0
    while done < n_samples:
        size = min(batch_size, n_samples - done)
        bits = random_phenotype_bits(params, size, rng)
        if use_bincount:
            acc += np.bincount(bits.astype(np.int64), minlength=1 << width)
        else:
            values, counts = np.unique(bits, return_counts=True)
            for v, c in zip(values.tolist(), counts.tolist()):
                extra[v] = extra.get(v, 0) + c
        done += size
    if use_bincount:
        nz = np.nonzero(acc)[0]
        return {int(v): int(acc[v]) for v in nz}
    return extra


def space_phenotype_counts(params: ChromosomeParams,
                           batch_size: int = DEFAULT_BATCH,
                           limit: int | None = None) -> dict[int, int]:
    """Exact phenotype histogram by enumerating the whole space."""
    size = params.space_size()
    if limit is not None and size > limit:
        raise ValidationError(f"space of {size} exceeds the limit {limit}")
    width = table_width(params.n_inputs)
    use_bincount = width <= 16
    acc = np.zeros(1 << width, dtype=np.int64) if use_bincount else None
    extra: dict[int, int] = {}
    start = 0
    while start < size:
        stop = min(start + batch_size, size)
        bits = evaluate_columns(params, enumerated_columns(params, start, stop))
        if use_bincount:
            acc += np.bincount(bits.astype(np.int64), minlength=1 << width)
        else:
            values, counts = np.unique(bits, return_counts=True)
            for v, c in zip(values.tolist(), counts.tolist()):
                extra[v] = extra.get(v, 0) + c
        start = stop
    if use_bincount:
        nz = np.nonzero(acc)[0]
        return {int(v): int(acc[v]) for v in nz}
    return extra
