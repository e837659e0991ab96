import math

import pytest

from circuitgp import (
    EVOLUTION,
    FULL_GATE_SET,
    SAMPLING,
    CgpGenotype,
    CgpNode,
    EnumerationSpec,
    GateFn,
    PartialResultError,
    Phenotype,
    ValidationError,
    cgp_params,
    enumerate_space,
    evolved_neutral_genotypes,
    exact_map_summary,
    genotype_evolvability,
    genotype_robustness,
    merge_redundancy,
    neighbor_phenotype_bits,
    neutral_genotypes,
    output_bits,
    phenotype_evolvability,
    phenotype_robustness,
    rank_from_counts,
    rank_table,
    sample_redundancy,
    sampled_neutral_genotypes,
    split_stream,
)

AND_GATE = CgpGenotype(2, (CgpNode(GateFn.AND, 1, 2),), 1)


def test_redundancy_table_basics(tiny_params):
    table = sample_redundancy(tiny_params, 30_000, split_stream(17, 1))
    assert table.total_samples == 30_000
    assert sum(table.counts.values()) == 30_000
    assert table.n_represented() + table.n_unrepresented() == 16
    assert table.frequency(0x0) == table.counts.get(0x0, 0) / 30_000
    # uniform sampling must land near the exact frequencies
    exact = exact_map_summary(EnumerationSpec(tiny_params))
    for bits, count in exact.counts.items():
        assert abs(table.frequency(bits) - count / 900) < 0.02


def test_redundancy_determinism(tiny_params):
    a = sample_redundancy(tiny_params, 5000, split_stream(17, 2))
    b = sample_redundancy(tiny_params, 5000, split_stream(17, 2))
    assert a.counts == b.counts


def test_merge_redundancy(tiny_params):
    a = sample_redundancy(tiny_params, 3000, split_stream(17, 3))
    b = sample_redundancy(tiny_params, 2000, split_stream(17, 4))
    merged = merge_redundancy([a, b])
    assert merged.total_samples == 5000
    for bits in set(a.counts) | set(b.counts):
        assert merged.counts[bits] == a.counts.get(bits, 0) + b.counts.get(bits, 0)
    with pytest.raises(ValidationError):
        merge_redundancy([a, sample_redundancy(cgp_params(2, 1, 1), 10, split_stream(1, 1))])
    with pytest.raises(ValidationError):
        merge_redundancy([])


def test_rank_ordering():
    counts = {0x3: 50, 0x1: 50, 0x7: 200, 0x0: 1}
    table = rank_from_counts(counts, 2, 301)
    assert [e.rank for e in table.entries] == [1, 2, 3, 4]
    assert [e.phenotype.bits for e in table.entries] == [0x7, 0x1, 0x3, 0x0]
    assert table.entries[0].log10_redundancy == pytest.approx(math.log10(200))
    assert table.n_unrepresented == 12
    assert table.total_samples == 301


def test_rank_table_wraps_redundancy(tiny_params):
    red = sample_redundancy(tiny_params, 2000, split_stream(17, 5))
    table = rank_table(red)
    counts = sorted(red.counts.values(), reverse=True)
    assert [e.count for e in table.entries] == counts


def test_genotype_robustness_pin():
    # all six neighbors of AND(1,2) leave phenotype 0x8
    # locus-major order: four function flips, then in1, then in2
    assert neighbor_phenotype_bits(AND_GATE, FULL_GATE_SET) == [
        0xE, 0x7, 0x1, 0x6, 0xA, 0xC,
    ]
    assert genotype_robustness(AND_GATE, FULL_GATE_SET) == 0.0
    assert genotype_evolvability(AND_GATE, FULL_GATE_SET) == 6
    # OR(1,1) computes 0xc; flipping to AND(1,1) is neutral
    g = CgpGenotype(2, (CgpNode(GateFn.OR, 1, 1),), 1)
    assert genotype_robustness(g, FULL_GATE_SET) == pytest.approx(1 / 6)


def test_evolved_source_maps_to_target(tiny_params):
    p = Phenotype(0x6, 2)
    rng = split_stream(23, 6)
    found = evolved_neutral_genotypes(p, tiny_params, 5, rng)
    assert len(found) == 5
    for g in found:
        assert output_bits(g, tiny_params.gate_set) == 0x6


def test_evolved_source_determinism(tiny_params):
    p = Phenotype(0x9, 2)
    a = evolved_neutral_genotypes(p, tiny_params, 4, split_stream(23, 7))
    b = evolved_neutral_genotypes(p, tiny_params, 4, split_stream(23, 7))
    assert a == b


def test_sampled_source(tiny_params):
    p = Phenotype(0x6, 2)
    found = sampled_neutral_genotypes(p, tiny_params, 8, split_stream(23, 8),
                                      max_draws=200_000)
    assert len(found) == 8
    for g in found:
        assert output_bits(g, tiny_params.gate_set) == 0x6


def test_sampled_source_partial(tiny_params):
    p = Phenotype(0x6, 2)
    with pytest.raises(PartialResultError) as err:
        sampled_neutral_genotypes(p, tiny_params, 10_000, split_stream(23, 9),
                                  max_draws=3000)
    assert 0 < err.value.achieved < 10_000
    assert len(err.value.partial) == err.value.achieved
    for g in err.value.partial:
        assert output_bits(g, tiny_params.gate_set) == 0x6


def test_neutral_genotypes_dispatch(tiny_params):
    p = Phenotype(0x8, 2)
    evo = neutral_genotypes(p, tiny_params, EVOLUTION, 3, None, split_stream(2, 1))
    samp = neutral_genotypes(p, tiny_params, SAMPLING, 3, 100_000, split_stream(2, 1))
    assert len(evo) == len(samp) == 3
    with pytest.raises(ValidationError):
        neutral_genotypes(p, tiny_params, "guessing", 3, None, split_stream(2, 1))


def test_phenotype_robustness_estimate(tiny_params):
    p = Phenotype(0x8, 2)
    gs = tiny_params.gate_set
    genotypes = [g for g in enumerate_space(EnumerationSpec(tiny_params))
                 if output_bits(g, gs) == 0x8][:10]
    est = phenotype_robustness(p, genotypes, 10, gs, method=SAMPLING)
    want = sum(genotype_robustness(g, gs) for g in genotypes) / 10
    assert est.value == pytest.approx(want)
    assert est.k_achieved == 10
    assert est.method == SAMPLING


def test_phenotype_robustness_rejects_wrong_source(tiny_params):
    p = Phenotype(0x8, 2)
    wrong = CgpGenotype(2, (CgpNode(GateFn.XOR, 1, 2), CgpNode(GateFn.XOR, 1, 2)), 2)
    with pytest.raises(ValidationError):
        phenotype_robustness(p, [wrong], 1, tiny_params.gate_set)


def test_saturating_evolvability_equals_exact(tiny_params):
    # with every genotype of p in the union, the sampled estimate must hit
    # the oracle value exactly
    exact = exact_map_summary(EnumerationSpec(tiny_params))
    gs = tiny_params.gate_set
    space = list(enumerate_space(EnumerationSpec(tiny_params)))
    for bits in (0x6, 0x8, 0x0):
        sources = [g for g in space if output_bits(g, gs) == bits]
        union = set()
        for g in sources:
            union.update(neighbor_phenotype_bits(g, gs))
        union.discard(bits)
        assert len(union) == exact.evolvability[bits]


def test_phenotype_evolvability_partial(tiny_params):
    p = Phenotype(0x6, 2)
    with pytest.raises(PartialResultError) as err:
        phenotype_evolvability(p, tiny_params, SAMPLING, 10_000, 2000,
                               split_stream(29, 1))
    assert isinstance(err.value.partial, int)
    assert err.value.partial > 0
    assert err.value.achieved < 10_000


def test_phenotype_evolvability_deterministic(tiny_params):
    p = Phenotype(0x6, 2)
    a = phenotype_evolvability(p, tiny_params, EVOLUTION, 5, None, split_stream(29, 2))
    b = phenotype_evolvability(p, tiny_params, EVOLUTION, 5, None, split_stream(29, 2))
    assert a == b > 0
