"""Deterministic experiment orchestration.

Work is cut into fixed logical units before any scheduling decision:
redundancy sampling into fixed-size shards, phenotype-level estimates
into per-phenotype streams keyed by phenotype bits. Every unit derives
its generator by splitting the master seed with a stable key, so results
are a function of (config, master seed) alone - worker counts and
scheduling order cannot change a single byte of output.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .circuits import Phenotype, table_width
from .complexity import KolmogorovResult, minimum_gate_profile, tononi_complexity
from .errors import PartialResultError, ValidationError
from .metrics import (
    DEFAULT_K,
    DEFAULT_SAMPLING_BUDGET,
    PhenotypeRecord,
    RedundancyTable,
    evolved_neutral_genotypes,
    merge_redundancy,
    neighbor_phenotype_bits,
    sample_redundancy,
    sampled_neutral_genotypes,
)
from .params import ChromosomeParams, random_genotype, split_stream

# Stream-key domains; every derived generator starts with one of these so
# no two work units can collide on a key.
DOMAIN_REDUNDANCY = 1
DOMAIN_EVOLVED_SOURCE = 2
DOMAIN_SAMPLED_SOURCE = 3
DOMAIN_KOLMOGOROV = 4
DOMAIN_WALK = 5
DOMAIN_EPOCHAL = 6
DOMAIN_RANDOM_GENOTYPES = 7

DEFAULT_SHARD_SIZE = 1 << 16


def shard_layout(n_samples: int, shard_size: int = DEFAULT_SHARD_SIZE) -> list[int]:
    """Sample count of each shard; fixed by budget, not by worker count."""
    if n_samples < 1:
        raise ValidationError("n_samples must be at least 1")
    if shard_size < 1:
        raise ValidationError("shard_size must be at least 1")
    full, rest = divmod(n_samples, shard_size)
    return [shard_size] * full + ([rest] if rest else [])


def _shard_table(job: tuple[ChromosomeParams, int, int, int]) -> RedundancyTable:
    params, master_seed, index, size = job
    rng = split_stream(master_seed, DOMAIN_REDUNDANCY, index)
    return sample_redundancy(params, size, rng)


def sample_redundancy_sharded(params: ChromosomeParams, n_samples: int,
                              master_seed: int, *, workers: int = 1,
                              shard_size: int = DEFAULT_SHARD_SIZE,
                              shard_range: tuple[int, int] | None = None) -> RedundancyTable:
    """Shard-seeded redundancy sampling, mergeable across processes.

    ``shard_range`` = (lo, hi) restricts to shard indices lo..hi-1 of the
    full layout, producing a partial table that merges with the other
    ranges into exactly the full-run table.
    """
    sizes = shard_layout(n_samples, shard_size)
    lo, hi = shard_range if shard_range is not None else (0, len(sizes))
    if not 0 <= lo < hi <= len(sizes):
        raise ValidationError(
            f"shard range {lo}:{hi} outside the {len(sizes)}-shard layout"
        )
    jobs = [(params, master_seed, i, sizes[i]) for i in range(lo, hi)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(_shard_table, jobs))
    else:
        tables = [_shard_table(job) for job in jobs]
    merged = merge_redundancy(tables)
    return RedundancyTable(
        params=merged.params,
        total_samples=merged.total_samples,
        counts=merged.counts,
        seed=master_seed,
    )


@dataclass(frozen=True)
class SuiteShortfall:
    """How far each genotype source fell short of the requested k."""

    requested_k: int
    evolution_achieved: int
    sampling_achieved: int

    @property
    def complete(self) -> bool:
        return (self.evolution_achieved == self.requested_k
                and self.sampling_achieved == self.requested_k)


def phenotype_suite(params: ChromosomeParams, bits: int, master_seed: int, *,
                    k: int = DEFAULT_K, max_steps: int | None = None,
                    sampling_budget: int = DEFAULT_SAMPLING_BUDGET,
                    with_sampling: bool = True, with_tononi: bool = True,
                    active_only: bool = False,
                    ) -> tuple[PhenotypeRecord, SuiteShortfall]:
    """Robustness, both evolvabilities, and Tononi complexity for one phenotype.

    The k evolved genotypes are found once and reused for robustness,
    evolution evolvability, and complexity, so the three views describe
    the same sample. Shortfalls are reported, not raised; the record
    carries whatever could be computed.
    """
    p = Phenotype(bits, params.n_inputs)
    gs = params.gate_set
    evo_rng = split_stream(master_seed, DOMAIN_EVOLVED_SOURCE, bits)
    try:
        evolved = evolved_neutral_genotypes(p, params, k, evo_rng, max_steps=max_steps)
    except PartialResultError as err:
        evolved = list(err.partial)

    robustness = None
    evolvability_evo = None
    tononi = None
    if evolved:
        # averages run over the distinct genotypes found, as in
        # phenotype_robustness; the union is insensitive to repeats
        distinct = list(dict.fromkeys(evolved))
        neutral_fractions = []
        union: set[int] = set()
        for g in distinct:
            nb = neighbor_phenotype_bits(g, gs)
            neutral_fractions.append(sum(1 for b in nb if b == bits) / len(nb))
            union.update(nb)
        union.discard(bits)
        robustness = sum(neutral_fractions) / len(neutral_fractions)
        evolvability_evo = len(union)
        if with_tononi:
            values = [
                tononi_complexity(g, gs, active_only=active_only).complexity
                for g in distinct
            ]
            tononi = sum(values) / len(values)

    evolvability_samp = None
    samp_achieved = k if not with_sampling else 0
    if with_sampling:
        samp_rng = split_stream(master_seed, DOMAIN_SAMPLED_SOURCE, bits)
        try:
            sampled = sampled_neutral_genotypes(p, params, k, samp_rng,
                                                max_draws=sampling_budget)
        except PartialResultError as err:
            sampled = list(err.partial)
        samp_achieved = len(sampled)
        if sampled:
            union = set()
            for g in sampled:
                union.update(neighbor_phenotype_bits(g, gs))
            union.discard(bits)
            evolvability_samp = len(union)

    record = PhenotypeRecord(
        phenotype=p,
        robustness=robustness,
        evolvability_evo=evolvability_evo,
        evolvability_samp=evolvability_samp,
        tononi=tononi,
    )
    shortfall = SuiteShortfall(
        requested_k=k,
        evolution_achieved=len(evolved),
        sampling_achieved=samp_achieved,
    )
    return record, shortfall


def structural_records(params: ChromosomeParams, master_seed: int, *,
                       n_samples: int, k: int = DEFAULT_K,
                       max_steps: int | None = None,
                       sampling_budget: int = DEFAULT_SAMPLING_BUDGET,
                       phenotypes: list[int] | None = None,
                       with_sampling: bool = True,
                       with_kolmogorov: bool = True,
                       kolmogorov_attempts: int = 10,
                       kolmogorov_step_budget: int | None = None,
                       workers: int = 1,
                       ) -> tuple[list[PhenotypeRecord], list[SuiteShortfall]]:
    """Full per-phenotype table: redundancy, robustness, evolvabilities,
    complexity measures, over the given phenotypes (default: all of them).

    The minimum-gate profile runs as one batched sweep shared by every
    phenotype; its stream is keyed by the domain alone, so the values do
    not depend on which phenotype subset was requested.
    """
    if phenotypes is None:
        phenotypes = list(range(1 << table_width(params.n_inputs)))
    redundancy = sample_redundancy_sharded(
        params, n_samples, master_seed, workers=workers
    )
    profile: dict[int, KolmogorovResult] = {}
    if with_kolmogorov:
        kol_rng = split_stream(master_seed, DOMAIN_KOLMOGOROV)
        profile = minimum_gate_profile(
            params,
            [Phenotype(b, params.n_inputs) for b in phenotypes],
            attempts=kolmogorov_attempts,
            step_budget=kolmogorov_step_budget,
            rng=kol_rng,
            allow_missing=True,
        )
    records: list[PhenotypeRecord] = []
    shortfalls: list[SuiteShortfall] = []
    for bits in phenotypes:
        record, shortfall = phenotype_suite(
            params, bits, master_seed, k=k, max_steps=max_steps,
            sampling_budget=sampling_budget, with_sampling=with_sampling,
        )
        count = redundancy.counts.get(bits, 0)
        kol = profile.get(bits)
        records.append(
            PhenotypeRecord(
                phenotype=record.phenotype,
                log10_redundancy=math.log10(count) if count > 0 else None,
                robustness=record.robustness,
                evolvability_evo=record.evolvability_evo,
                evolvability_samp=record.evolvability_samp,
                tononi=record.tononi,
                kolmogorov=kol.value if kol else None,
                k_exact=kol.exact if kol else None,
            )
        )
        shortfalls.append(shortfall)
    return records, shortfalls


def random_genotype_complexities(params: ChromosomeParams, count: int,
                                 master_seed: int, *,
                                 active_only: bool = False) -> list[float]:
    """Tononi complexity of ``count`` uniform random genotypes."""
    rng = split_stream(master_seed, DOMAIN_RANDOM_GENOTYPES)
    return [
        tononi_complexity(random_genotype(params, rng), params.gate_set,
                          active_only=active_only).complexity
        for _ in range(count)
    ]
