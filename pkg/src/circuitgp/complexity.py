"""Information-theoretic and minimum-gate complexity of circuits.

The Tononi complexity of a circuit views its gate-state matrix as M rows
of 2^n column states: C = (1/2) Sigma_{k=1..M} <MI(subset; complement)>
where <.> averages over all size-k row subsets. Base-2 logarithms
throughout. MI against an empty complement is 0, so a 1-gate circuit has
complexity 0.

The Kolmogorov analog of a phenotype is the smallest gate count m whose
circuit space contains a witness. Each m is searched exhaustively when
the space fits a configured bound, otherwise by repeated epochal
evolution; the result is exact only if every smaller m was exhausted.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import batcheval
from .circuits import (
    CgpGenotype,
    GateStateMatrix,
    Genotype,
    Phenotype,
    active_gate_rows,
    active_instruction_rows,
    evaluate,
    output_bits,
    table_width,
)
from .errors import (
    CircuitGpError,
    PartialResultError,
    ResourceLimitError,
    SearchExhaustedError,
    ValidationError,
)
from .evolve import EpochalOutcome, default_max_steps, epochal_evolve
from .gates import GateSet
from .metrics import PhenotypeEstimate, neutral_genotypes
from .oracle import EnumerationSpec, enumerate_space, genotype_at
from .params import ChromosomeParams, cgp_params, lgp_params

MAX_EXACT_GATES = 24
DEFAULT_EXHAUSTIVE_BOUND = 100_000_000
DEFAULT_MAX_GATES = 16
DEFAULT_ATTEMPTS = 10


def _column_keys(rows: Sequence[int], width: int) -> list[int]:
    """Encode each truth-table column as an integer state over the rows."""
    keys = []
    for p in range(width):
        key = 0
        for i, row in enumerate(rows):
            key |= ((row >> p) & 1) << i
        keys.append(key)
    return keys


def _entropy_of_multiplicities(mults: Iterable[int], width: int) -> float:
    return math.log2(width) - sum(m * math.log2(m) for m in mults) / width


def _subset_entropy(rows: Sequence[int], width: int) -> float:
    """Column-distribution entropy in bits; empty row sets carry zero."""
    if not rows:
        return 0.0
    counts = Counter(_column_keys(rows, width))
    return _entropy_of_multiplicities(counts.values(), width)


def matrix_entropy(matrix: GateStateMatrix, rows: Sequence[int] | None = None) -> float:
    """Entropy of the column-state distribution of ``matrix``.

    ``rows`` selects a subset by 0-based row index; default is all rows.
    Each of the 2^n columns is one state; p_i is its multiplicity / 2^n.
    """
    selected = matrix.rows if rows is None else tuple(matrix.rows[i] for i in rows)
    return _subset_entropy(selected, matrix.width)


def mutual_information(a: Sequence[int], b: Sequence[int],
                       matrix: GateStateMatrix) -> float:
    """MI(a;b) = H(a) + H(b) - H(a u b) over disjoint row-index subsets."""
    if set(a) & set(b):
        raise ValidationError("row subsets must be disjoint")
    return (
        matrix_entropy(matrix, a)
        + matrix_entropy(matrix, b)
        - matrix_entropy(matrix, tuple(a) + tuple(b))
    )


@lru_cache(maxsize=8)
def _run_entropy_lut(width: int) -> np.ndarray:
    """Sigma m*log2(m) for every equality pattern of a sorted width-row.

    Pattern bit i says sorted element i+1 equals element i; run lengths
    follow, and the table turns a per-mask sort into one lookup.
    """
    table = np.empty(1 << (width - 1))
    for pattern in range(1 << (width - 1)):
        acc = 0.0
        run = 1
        for i in range(width - 1):
            if (pattern >> i) & 1:
                run += 1
            else:
                acc += run * math.log2(run)
                run = 1
        acc += run * math.log2(run)
        table[pattern] = acc
    return table


def _all_subset_entropies(rows: Sequence[int], width: int) -> np.ndarray:
    """Entropy for every one of the 2^M row subsets, indexed by bitmask."""
    m = len(rows)
    if width > 16:
        out = np.empty(1 << m)
        for mask in range(1 << m):
            out[mask] = _subset_entropy(
                [rows[i] for i in range(m) if (mask >> i) & 1], width
            )
        return out
    cols = np.array(_column_keys(rows, width), dtype=np.uint32)
    lut = _run_entropy_lut(width)
    log2w = math.log2(width)
    out = np.empty(1 << m)
    out[0] = 0.0
    chunk = 1 << 15
    n_packed = (width - 1 + 7) // 8
    for start in range(0, 1 << m, chunk):
        stop = min(start + chunk, 1 << m)
        block = np.arange(start, stop, dtype=np.uint32)[:, None] & cols[None, :]
        block.sort(axis=1)
        eq = block[:, 1:] == block[:, :-1]
        packed = np.packbits(eq, axis=1, bitorder="little")
        pattern = packed[:, 0].astype(np.int64)
        for b in range(1, n_packed):
            pattern |= packed[:, b].astype(np.int64) << (8 * b)
        out[start:stop] = log2w - lut[pattern] / width
    out[0] = 0.0
    return out


@dataclass(frozen=True)
class TononiResult:
    """Complexity in bits with its per-cardinality decomposition."""

    complexity: float
    per_k_terms: tuple[float, ...]
    n_gates: int
    exact: bool


def _selected_rows(g: Genotype, matrix: GateStateMatrix,
                   active_only: bool) -> tuple[int, ...]:
    if not active_only:
        return matrix.rows
    indices = (
        active_gate_rows(g) if isinstance(g, CgpGenotype) else active_instruction_rows(g)
    )
    return tuple(matrix.rows[i] for i in indices)


def tononi_complexity(g: Genotype, gs: GateSet, *, active_only: bool = False,
                      max_exact_gates: int = MAX_EXACT_GATES,
                      subset_samples: int | None = None,
                      rng: np.random.Generator | None = None) -> TononiResult:
    """Tononi complexity of a circuit's gate-state matrix.

    Exact mode enumerates all 2^M subsets and is guarded to M below
    ``max_exact_gates``; past that a subset-sampling estimate is used when
    ``subset_samples`` is given (``rng`` required), else a resource error.
    """
    _, matrix = evaluate(g, gs)
    rows = _selected_rows(g, matrix, active_only)
    m = len(rows)
    width = matrix.width
    if m == 1:
        return TononiResult(0.0, (0.0,), 1, True)
    if m <= max_exact_gates:
        ent = _all_subset_entropies(rows, width)
        full = ent[-1]
        masks = np.arange(1 << m, dtype=np.uint32)
        mi = ent + ent[::-1] - full  # complement of mask i is (2^m - 1) - i
        sizes = np.bitwise_count(masks)
        sums = np.bincount(sizes, weights=mi, minlength=m + 1)
        counts = np.bincount(sizes, minlength=m + 1)
        per_k = tuple(float(sums[k] / counts[k]) for k in range(1, m + 1))
        return TononiResult(0.5 * sum(per_k), per_k, m, True)
    if subset_samples is None:
        raise ResourceLimitError(
            f"{m} gates exceeds the exact-mode bound of {max_exact_gates}; "
            "pass subset_samples for the sampling estimator"
        )
    if rng is None:
        raise ValidationError("subset sampling requires an rng")
    cache: dict[int, float] = {0: 0.0}

    def ent_for(mask: int) -> float:
        if mask not in cache:
            cache[mask] = _subset_entropy(
                [rows[i] for i in range(m) if (mask >> i) & 1], width
            )
        return cache[mask]

    full = ent_for((1 << m) - 1)
    per_k = []
    for k in range(1, m + 1):
        total = 0.0
        n_draws = min(subset_samples, math.comb(m, k))
        for _ in range(n_draws):
            chosen = rng.choice(m, size=k, replace=False)
            mask = 0
            for i in chosen:
                mask |= 1 << int(i)
            total += ent_for(mask) + ent_for((1 << m) - 1 - mask) - full
        per_k.append(total / n_draws)
    return TononiResult(0.5 * sum(per_k), tuple(per_k), m, False)


def tononi_complexity_left_form(g: Genotype, gs: GateSet, *,
                                active_only: bool = False) -> float:
    """Sum over k up to M/2 with the self-complementary level halved.

    Redundant with tononi_complexity by symmetry; kept as an independent
    cross-check for tests.
    """
    _, matrix = evaluate(g, gs)
    rows = _selected_rows(g, matrix, active_only)
    m = len(rows)
    if m == 1:
        return 0.0
    width = matrix.width
    full = _subset_entropy(rows, width)
    total = 0.0
    for k in range(1, m // 2 + 1):
        term = 0.0
        count = 0
        for mask in range(1 << m):
            if bin(mask).count("1") != k:
                continue
            a = [rows[i] for i in range(m) if (mask >> i) & 1]
            b = [rows[i] for i in range(m) if not (mask >> i) & 1]
            term += _subset_entropy(a, width) + _subset_entropy(b, width) - full
            count += 1
        mean = term / count
        if 2 * k == m:
            mean /= 2
        total += mean
    return total


def tononi_complexity_phenotype(p: Phenotype, params: ChromosomeParams,
                                method: str, k: int, budget: int | None,
                                rng: np.random.Generator, *,
                                active_only: bool = False) -> PhenotypeEstimate:
    """Mean circuit complexity over k genotypes that map to ``p``.

    Returns a PhenotypeEstimate; budget semantics follow
    metrics.neutral_genotypes. Partial sources raise PartialResultError
    with the partial mean inside.
    """

    def mean_over(genotypes: list[Genotype]) -> float | None:
        # distinct genotypes only, matching the robustness estimator
        distinct = list(dict.fromkeys(genotypes))
        if not distinct:
            return None
        values = [
            tononi_complexity(g, params.gate_set, active_only=active_only).complexity
            for g in distinct
        ]
        return sum(values) / len(values)

    try:
        genotypes = neutral_genotypes(p, params, method, k, budget, rng)
    except PartialResultError as err:
        estimate = PhenotypeEstimate(
            value=mean_over(list(err.partial)), k_achieved=err.achieved, method=method
        )
        raise PartialResultError(
            f"complexity of {p} averaged over {err.achieved}/{k} genotypes",
            partial=estimate,
            achieved=err.achieved,
        ) from err
    return PhenotypeEstimate(value=mean_over(genotypes), k_achieved=k, method=method)


@dataclass(frozen=True)
class KolmogorovResult:
    """Minimum gate count found for a phenotype, with its witness."""

    value: int
    exact: bool
    witness: Genotype
    attempts_per_size: int
    step_budget: int


def _m_gate_params(params: ChromosomeParams, m: int,
                   restricted: bool) -> ChromosomeParams:
    if params.is_cgp:
        lb = params.levels_back if restricted else m
        return cgp_params(params.n_inputs, m, lb, gate_set=params.gate_set)
    return lgp_params(params.n_inputs, m, params.n_calc_registers,
                      gate_set=params.gate_set)


def _exhaustive_witness(params_m: ChromosomeParams, bits: int) -> Genotype | None:
    """First genotype in flat order mapping to ``bits``, or None."""
    if batcheval.supports(params_m):
        size = params_m.space_size()
        start = 0
        while start < size:
            stop = min(start + batcheval.DEFAULT_BATCH, size)
            out = batcheval.evaluate_columns(
                params_m, batcheval.enumerated_columns(params_m, start, stop)
            )
            hits = np.nonzero(out == np.uint64(bits))[0]
            if len(hits):
                return genotype_at(params_m, start + int(hits[0]))
            start = stop
        return None
    for g in enumerate_space(EnumerationSpec(params_m)):
        if output_bits(g, params_m.gate_set) == bits:
            return g
    return None


def _checked(witness: Genotype, gs: GateSet, bits: int) -> Genotype:
    if output_bits(witness, gs) != bits:
        raise CircuitGpError("minimum-gate witness failed re-evaluation")
    return witness


def kolmogorov_complexity(p: Phenotype, params: ChromosomeParams,
                          attempts: int = DEFAULT_ATTEMPTS,
                          step_budget: int | None = None,
                          rng: np.random.Generator | None = None, *,
                          exhaustive_bound: int = DEFAULT_EXHAUSTIVE_BOUND,
                          max_gates: int = DEFAULT_MAX_GATES,
                          restricted_levels_back: bool = False) -> KolmogorovResult:
    """Smallest gate count whose space holds a circuit mapping to ``p``.

    Gate counts are tried in increasing order. A count whose space size
    fits ``exhaustive_bound`` is enumerated completely; larger spaces get
    ``attempts`` epochal runs of ``step_budget`` steps each. The result is
    exact only when every smaller count was exhausted. The witness is
    re-evaluated before being returned.
    """
    if p.n_inputs != params.n_inputs:
        raise ValidationError("phenotype arity does not match params")
    if step_budget is None:
        step_budget = default_max_steps(params.n_inputs)
    all_prev_exhausted = True
    for m in range(1, max_gates + 1):
        params_m = _m_gate_params(params, m, restricted_levels_back)
        if params_m.space_size() <= exhaustive_bound:
            witness = _exhaustive_witness(params_m, p.bits)
            if witness is not None:
                return KolmogorovResult(
                    value=m,
                    exact=all_prev_exhausted,
                    witness=_checked(witness, params.gate_set, p.bits),
                    attempts_per_size=attempts,
                    step_budget=step_budget,
                )
            continue
        if rng is None:
            raise ValidationError(
                f"space at {m} gates exceeds the exhaustive bound; an rng is "
                "required for the epochal fallback"
            )
        for _ in range(attempts):
            result = epochal_evolve(p, params_m, step_budget, rng.spawn(1)[0])
            if result.outcome is EpochalOutcome.FOUND:
                return KolmogorovResult(
                    value=m,
                    exact=all_prev_exhausted,
                    witness=_checked(result.final_genotype, params.gate_set, p.bits),
                    attempts_per_size=attempts,
                    step_budget=step_budget,
                )
        all_prev_exhausted = False
    raise SearchExhaustedError(
        f"no circuit for {p} found at up to {max_gates} gates"
    )


def minimum_gate_profile(params: ChromosomeParams,
                         targets: Iterable[Phenotype] | None = None,
                         attempts: int = DEFAULT_ATTEMPTS,
                         step_budget: int | None = None,
                         rng: np.random.Generator | None = None, *,
                         exhaustive_bound: int = DEFAULT_EXHAUSTIVE_BOUND,
                         max_gates: int = DEFAULT_MAX_GATES,
                         restricted_levels_back: bool = False,
                         allow_missing: bool = False) -> dict[int, KolmogorovResult]:
    """Minimum gate counts for many phenotypes in one sweep per gate count.

    Exhaustive passes record the first witness for every still-unresolved
    target at once, so the whole profile costs one enumeration per gate
    count instead of one per phenotype. Semantics per target match
    kolmogorov_complexity.
    """
    width = table_width(params.n_inputs)
    if targets is None:
        remaining = set(range(1 << width))
    else:
        remaining = set()
        for p in targets:
            if p.n_inputs != params.n_inputs:
                raise ValidationError("phenotype arity does not match params")
            remaining.add(p.bits)
    if step_budget is None:
        step_budget = default_max_steps(params.n_inputs)
    results: dict[int, KolmogorovResult] = {}
    all_prev_exhausted = True
    for m in range(1, max_gates + 1):
        if not remaining:
            break
        params_m = _m_gate_params(params, m, restricted_levels_back)
        if params_m.space_size() <= exhaustive_bound:
            for bits, flat in _scan_for_targets(params_m, remaining).items():
                witness = _checked(genotype_at(params_m, flat), params.gate_set, bits)
                results[bits] = KolmogorovResult(
                    value=m, exact=all_prev_exhausted, witness=witness,
                    attempts_per_size=attempts, step_budget=step_budget,
                )
                remaining.discard(bits)
            continue
        if rng is None and remaining:
            raise ValidationError(
                f"space at {m} gates exceeds the exhaustive bound; an rng is "
                "required for the epochal fallback"
            )
        for bits in sorted(remaining):
            target = Phenotype(bits, params.n_inputs)
            for _ in range(attempts):
                result = epochal_evolve(target, params_m, step_budget, rng.spawn(1)[0])
                if result.outcome is EpochalOutcome.FOUND:
                    results[bits] = KolmogorovResult(
                        value=m, exact=all_prev_exhausted,
                        witness=_checked(result.final_genotype, params.gate_set, bits),
                        attempts_per_size=attempts, step_budget=step_budget,
                    )
                    remaining.discard(bits)
                    break
        all_prev_exhausted = False
    if remaining and not allow_missing:
        raise SearchExhaustedError(
            f"{len(remaining)} phenotypes unresolved at up to {max_gates} gates"
        )
    return results


def _scan_for_targets(params_m: ChromosomeParams,
                      remaining: set[int]) -> dict[int, int]:
    """First flat index mapping to each target, scanning the whole space."""
    found: dict[int, int] = {}
    size = params_m.space_size()
    width = table_width(params_m.n_inputs)
    if batcheval.supports(params_m):
        wanted = set(remaining)
        use_lookup = width <= 16
        lookup = None
        if use_lookup:
            lookup = np.zeros(1 << width, dtype=bool)
            lookup[list(wanted)] = True
        start = 0
        while start < size and wanted:
            stop = min(start + batcheval.DEFAULT_BATCH, size)
            out = batcheval.evaluate_columns(
                params_m, batcheval.enumerated_columns(params_m, start, stop)
            )
            if use_lookup:
                hits = np.nonzero(lookup[out.astype(np.int64)])[0]
            else:
                hits = np.nonzero(np.isin(out, np.fromiter(wanted, dtype=np.uint64)))[0]
            for pos in hits:
                bits = int(out[pos])
                if bits in wanted:
                    found[bits] = start + int(pos)
                    wanted.discard(bits)
                    if use_lookup:
                        lookup[bits] = False
            start = stop
        return found
    wanted = set(remaining)
    for flat, g in enumerate(enumerate_space(EnumerationSpec(params_m))):
        if not wanted:
            break
        bits = output_bits(g, params_m.gate_set)
        if bits in wanted:
            found[bits] = flat
            wanted.discard(bits)
    return found
