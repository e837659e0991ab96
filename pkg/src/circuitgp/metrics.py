"""Structural measures of the genotype-phenotype map.

Redundancy is estimated by uniform sampling, robustness and evolvability
from exact 1-mutation neighborhoods. Phenotype-level figures average over
genotypes that map to the phenotype, found either by evolving toward it
(epochal search, relaxed by a neutral drift after arrival) or by filtering
uniform draws. Both source kinds report
how many genotypes they actually delivered; shortfalls surface as
PartialResultError rather than silently thinner averages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import islice
from typing import Iterable

import numpy as np

from . import batcheval
from .circuits import Genotype, Phenotype, output_bits, table_width
from .errors import CircuitStructureError, PartialResultError, ValidationError
from .evolve import EpochalOutcome, default_max_steps, epochal_evolve, neutral_walk
from .gates import GateSet
from .mutation import enumerate_neighbors, list_mutable_loci
from .params import ChromosomeParams, random_genotype

DEFAULT_K = 600          # genotypes per phenotype-level estimate
DESK_K = 50              # reduced budget used by fast test configurations
DEFAULT_SAMPLING_BUDGET = 10_000_000
DEFAULT_ATTEMPT_FACTOR = 3  # epochal retries allowed per requested genotype
DRIFT_STEPS_PER_LOCUS = 25  # post-arrival neutral drift length, per mutable locus

EVOLUTION = "evolution"
SAMPLING = "sampling"


@dataclass(frozen=True)
class RedundancyTable:
    """Phenotype occurrence counts from uniform genotype sampling."""

    params: ChromosomeParams
    total_samples: int
    counts: dict[int, int]
    seed: int | None = None

    def frequency(self, bits: int) -> float:
        return self.counts.get(bits, 0) / self.total_samples

    def n_represented(self) -> int:
        return sum(1 for c in self.counts.values() if c > 0)

    def n_unrepresented(self) -> int:
        return (1 << table_width(self.params.n_inputs)) - self.n_represented()


def sample_redundancy(params: ChromosomeParams, n_samples: int,
                      rng: np.random.Generator) -> RedundancyTable:
    """Draw ``n_samples`` uniform genotypes and count their phenotypes."""
    if n_samples < 1:
        raise ValidationError("n_samples must be at least 1")
    if batcheval.supports(params):
        counts = batcheval.sample_phenotype_counts(params, n_samples, rng)
    else:
        counts = {}
        for _ in range(n_samples):
            bits = output_bits(random_genotype(params, rng), params.gate_set)
            counts[bits] = counts.get(bits, 0) + 1
    return RedundancyTable(params=params, total_samples=n_samples, counts=counts)


def merge_redundancy(tables: Iterable[RedundancyTable]) -> RedundancyTable:
    """Combine shard tables; counts add, parameters must agree."""
    tables = list(tables)
    if not tables:
        raise ValidationError("nothing to merge")
    params = tables[0].params
    for t in tables[1:]:
        if t.params != params:
            raise ValidationError("cannot merge redundancy tables with different params")
    counts: dict[int, int] = {}
    total = 0
    for t in tables:
        total += t.total_samples
        for bits, c in t.counts.items():
            counts[bits] = counts.get(bits, 0) + c
    seeds = {t.seed for t in tables}
    seed = seeds.pop() if len(seeds) == 1 else None
    return RedundancyTable(params=params, total_samples=total, counts=counts, seed=seed)


@dataclass(frozen=True)
class RankEntry:
    rank: int
    phenotype: Phenotype
    count: int

    @property
    def log10_redundancy(self) -> float:
        return math.log10(self.count)


@dataclass(frozen=True)
class RankTable:
    entries: tuple[RankEntry, ...]
    n_unrepresented: int
    total_samples: int


def rank_from_counts(counts: dict[int, int], n_inputs: int,
                     total_samples: int) -> RankTable:
    """Represented phenotypes sorted by count descending, value ascending."""
    represented = [(bits, c) for bits, c in counts.items() if c > 0]
    represented.sort(key=lambda item: (-item[1], item[0]))
    entries = tuple(
        RankEntry(rank=i + 1, phenotype=Phenotype(bits, n_inputs), count=c)
        for i, (bits, c) in enumerate(represented)
    )
    return RankTable(
        entries=entries,
        n_unrepresented=(1 << table_width(n_inputs)) - len(entries),
        total_samples=total_samples,
    )


def rank_table(table: RedundancyTable) -> RankTable:
    return rank_from_counts(table.counts, table.params.n_inputs, table.total_samples)


def neighbor_phenotype_bits(g: Genotype, gs: GateSet) -> list[int]:
    """Phenotype bits of every 1-mutation neighbor, in enumeration order."""
    return [output_bits(nb, gs) for nb in enumerate_neighbors(g, gs)]


def genotype_robustness(g: Genotype, gs: GateSet) -> float:
    """Fraction of single-point mutants that preserve the phenotype."""
    own = output_bits(g, gs)
    nb = neighbor_phenotype_bits(g, gs)
    if not nb:
        raise CircuitStructureError("genotype has no mutable loci")
    return sum(1 for bits in nb if bits == own) / len(nb)


def genotype_evolvability(g: Genotype, gs: GateSet) -> int:
    """Number of distinct non-self phenotypes in the 1-neighborhood."""
    own = output_bits(g, gs)
    nb = neighbor_phenotype_bits(g, gs)
    if not nb:
        raise CircuitStructureError("genotype has no mutable loci")
    return len(set(nb) - {own})


def evolved_neutral_genotypes(p: Phenotype, params: ChromosomeParams, k: int,
                              rng: np.random.Generator,
                              max_steps: int | None = None,
                              max_attempts: int | None = None,
                              drift_steps: int | None = None) -> list[Genotype]:
    """Find ``k`` genotypes mapping to ``p`` via independent epochal runs.

    Each run keeps evolving after arrival: the first genotype reaching p is
    drifted along a neutral walk for ``drift_steps`` mutations and the walk's
    end is what gets collected. Raw arrival points over-represent the edge of
    the neutral set (genotypes with many non-neutral neighbors are the easy
    entrances), which drags the sampled mean robustness down; the walk is a
    symmetric chain on these constant-degree spaces, so drifting relaxes each
    run toward the uniform distribution on its component. ``drift_steps=0``
    keeps the raw arrival genotypes; the default scales with the locus count.

    Each attempt consumes one spawned child stream, so the schedule is a
    pure function of the incoming generator's state. Attempts that hit the
    step limit are discarded; after ``max_attempts`` total attempts the
    shortfall is raised as PartialResultError carrying what was found.
    """
    if k < 1:
        raise ValidationError("k must be at least 1")
    if max_steps is None:
        max_steps = default_max_steps(params.n_inputs)
    if max_attempts is None:
        max_attempts = DEFAULT_ATTEMPT_FACTOR * k
    if drift_steps is not None and drift_steps < 0:
        raise ValidationError("drift_steps must be >= 0")
    found: list[Genotype] = []
    attempts = 0
    while len(found) < k and attempts < max_attempts:
        run_rng = rng.spawn(1)[0]
        attempts += 1
        result = epochal_evolve(p, params, max_steps, run_rng)
        if result.outcome is EpochalOutcome.FOUND:
            g = result.final_genotype
            if drift_steps is None:
                # locus count is a constant of the space, not of g
                drift_steps = DRIFT_STEPS_PER_LOCUS * len(
                    list_mutable_loci(g, params.gate_set)
                )
            if drift_steps:
                g = neutral_walk(g, params.gate_set, drift_steps, run_rng).final_genotype
            found.append(g)
    if len(found) < k:
        raise PartialResultError(
            f"epochal search delivered {len(found)}/{k} genotypes for {p} "
            f"within {max_attempts} attempts",
            partial=found,
            achieved=len(found),
        )
    return found


def sampled_neutral_genotypes(p: Phenotype, params: ChromosomeParams, k: int,
                              rng: np.random.Generator,
                              max_draws: int = DEFAULT_SAMPLING_BUDGET) -> list[Genotype]:
    """Find ``k`` genotypes mapping to ``p`` by filtering uniform draws."""
    if k < 1:
        raise ValidationError("k must be at least 1")
    if p.n_inputs != params.n_inputs:
        raise ValidationError("phenotype arity does not match params")
    found: list[Genotype] = []
    drawn = 0
    if batcheval.supports(params):
        while len(found) < k and drawn < max_draws:
            size = min(batcheval.DEFAULT_BATCH, max_draws - drawn)
            columns = batcheval.random_genotype_columns(params, size, rng)
            bits = batcheval.evaluate_columns(params, columns)
            for row in np.nonzero(bits == np.uint64(p.bits))[0]:
                found.append(batcheval.genotype_from_columns(params, columns, int(row)))
                if len(found) == k:
                    break
            drawn += size
    else:
        while len(found) < k and drawn < max_draws:
            g = random_genotype(params, rng)
            drawn += 1
            if output_bits(g, params.gate_set) == p.bits:
                found.append(g)
    if len(found) < k:
        raise PartialResultError(
            f"uniform sampling delivered {len(found)}/{k} genotypes for {p} "
            f"within {max_draws} draws",
            partial=found,
            achieved=len(found),
        )
    return found


def neutral_genotypes(p: Phenotype, params: ChromosomeParams, method: str, k: int,
                      budget: int | None, rng: np.random.Generator) -> list[Genotype]:
    """Dispatch to the evolution or sampling source.

    ``budget`` is the per-run step limit for EVOLUTION and the total draw
    limit for SAMPLING; None selects the defaults of each source.
    """
    if method == EVOLUTION:
        return evolved_neutral_genotypes(p, params, k, rng, max_steps=budget)
    if method == SAMPLING:
        if budget is None:
            budget = DEFAULT_SAMPLING_BUDGET
        return sampled_neutral_genotypes(p, params, k, rng, max_draws=budget)
    raise ValidationError(f"unknown source method {method!r}; use evolution or sampling")


@dataclass(frozen=True)
class PhenotypeEstimate:
    """A phenotype-level estimate plus how it was obtained."""

    value: float | None
    k_achieved: int
    method: str


@dataclass(frozen=True)
class PhenotypeRecord:
    """Join record of every per-phenotype measure; None marks a measure
    whose producing experiment did not run."""

    phenotype: Phenotype
    log10_redundancy: float | None = None
    robustness: float | None = None
    evolvability_evo: int | None = None
    evolvability_samp: int | None = None
    tononi: float | None = None
    kolmogorov: int | None = None
    k_exact: bool | None = None


def phenotype_robustness(p: Phenotype, genotype_source: Iterable[Genotype],
                         k: int, gs: GateSet, *,
                         method: str = "unspecified") -> PhenotypeEstimate:
    """Mean genotype robustness over ``k`` genotypes that map to ``p``.

    The mean is taken over the distinct genotypes among the k delivered.
    Repeats carry no information about the set being averaged, and for the
    evolved source they concentrate on small neutral components (which are
    rediscovered in full on every arrival); counting each genotype once
    keeps the estimator consistent: as k grows the distinct sample tends to
    the whole neutral set and the mean to the exact phenotype robustness.
    """
    genotypes = list(islice(iter(genotype_source), k))
    values = []
    seen: set[Genotype] = set()
    for g in genotypes:
        if output_bits(g, gs) != p.bits:
            raise ValidationError("source genotype does not map to the target phenotype")
        if g in seen:
            continue
        seen.add(g)
        values.append(genotype_robustness(g, gs))
    estimate = PhenotypeEstimate(
        value=sum(values) / len(values) if values else None,
        k_achieved=len(genotypes),
        method=method,
    )
    if len(genotypes) < k:
        raise PartialResultError(
            f"genotype source delivered {len(genotypes)}/{k} genotypes for {p}",
            partial=estimate,
            achieved=len(genotypes),
        )
    return estimate


def _union_evolvability(p: Phenotype, genotypes: list[Genotype], gs: GateSet,
                        include_self: bool) -> int:
    seen: set[int] = set()
    for g in genotypes:
        seen.update(neighbor_phenotype_bits(g, gs))
    if not include_self:
        seen.discard(p.bits)
    return len(seen)


def phenotype_evolvability(p: Phenotype, params: ChromosomeParams, method: str,
                           k: int, budget: int | None, rng: np.random.Generator,
                           *, include_self: bool = False) -> int:
    """Distinct phenotypes reachable by one mutation from k genotypes of p.

    The union is taken across all k neighborhoods; p itself is excluded
    unless ``include_self``. On budget exhaustion the partial union count
    is raised inside a PartialResultError.
    """
    try:
        genotypes = neutral_genotypes(p, params, method, k, budget, rng)
    except PartialResultError as err:
        count = _union_evolvability(p, list(err.partial), params.gate_set, include_self)
        raise PartialResultError(
            f"evolvability of {p} computed from {err.achieved}/{k} genotypes",
            partial=count,
            achieved=err.achieved,
        ) from err
    return _union_evolvability(p, genotypes, params.gate_set, include_self)
