import numpy as np
import pytest

from circuitgp import (
    FULL_GATE_SET,
    CgpGenotype,
    CgpNode,
    GateFn,
    Phenotype,
    SearchExhaustedError,
    ValidationError,
    cgp_params,
    evaluate,
    kolmogorov_complexity,
    lgp_params,
    matrix_entropy,
    minimum_gate_profile,
    mutual_information,
    output_bits,
    random_genotype,
    split_stream,
    tononi_complexity,
    tononi_complexity_left_form,
    tononi_complexity_phenotype,
)
from circuitgp.metrics import EVOLUTION

H1_PIN = 0.8112781244591328  # binary entropy of a 6/8 column split


def test_entropy_pins(worked_cgp):
    _, m = evaluate(worked_cgp, FULL_GATE_SET)
    assert matrix_entropy(m) == pytest.approx(1.5, abs=1e-12)
    assert matrix_entropy(m, rows=[0]) == pytest.approx(H1_PIN, abs=1e-12)
    assert matrix_entropy(m, rows=[1]) == pytest.approx(H1_PIN, abs=1e-12)
    assert matrix_entropy(m, rows=[2]) == pytest.approx(1.0, abs=1e-12)
    assert matrix_entropy(m, rows=[]) == 0.0


def test_mutual_information_pins(worked_cgp):
    _, m = evaluate(worked_cgp, FULL_GATE_SET)
    assert mutual_information([1], [0, 2], m) == pytest.approx(0.8113, abs=1e-4)
    assert mutual_information([0], [1, 2], m) == pytest.approx(H1_PIN, abs=1e-12)
    assert mutual_information([2], [0, 1], m) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValidationError):
        mutual_information([0, 1], [1, 2], m)  # overlapping subsets


def test_complexity_pin(worked_cgp):
    result = tononi_complexity(worked_cgp, FULL_GATE_SET)
    assert result.complexity == pytest.approx(0.8741854163060885, abs=1e-12)
    assert result.n_gates == 3
    assert result.exact
    assert len(result.per_k_terms) == 3
    # three-gate circuit: the k=3 term pairs each subset with its complement
    assert result.per_k_terms[-1] == pytest.approx(0.0, abs=1e-12)


def test_complexity_of_lgp_matches_cgp(worked_cgp, worked_lgp):
    a = tononi_complexity(worked_cgp, FULL_GATE_SET).complexity
    b = tononi_complexity(worked_lgp, FULL_GATE_SET).complexity
    assert a == pytest.approx(b, abs=1e-12)


def test_single_gate_complexity_is_zero():
    g = CgpGenotype(2, (CgpNode(GateFn.AND, 1, 2),), 1)
    result = tononi_complexity(g, FULL_GATE_SET)
    assert result.complexity == 0.0
    assert result.per_k_terms == (0.0,)


def test_left_and_right_forms_agree():
    # seeded sweep over both representations and sizes
    rng = split_stream(41, 1)
    for params in (cgp_params(2, 5, 3), cgp_params(3, 6, 4), lgp_params(3, 5, 2)):
        for _ in range(10):
            g = random_genotype(params, rng)
            right = tononi_complexity(g, params.gate_set).complexity
            left = tononi_complexity_left_form(g, params.gate_set)
            assert right == pytest.approx(left, abs=1e-9)


def test_active_only_variant(worked_cgp):
    # every gate is active in the worked example: both flavors agree
    full = tononi_complexity(worked_cgp, FULL_GATE_SET).complexity
    act = tononi_complexity(worked_cgp, FULL_GATE_SET, active_only=True).complexity
    assert act == pytest.approx(full, abs=1e-12)
    # appending a dead gate changes the full matrix but not the active one
    bigger = CgpGenotype(
        3,
        worked_cgp.nodes[:2]
        + (CgpNode(GateFn.NOR, 1, 1), CgpNode(GateFn.XOR, 4, 5)),
        7,
    )
    assert output_bits(bigger, FULL_GATE_SET) == 0x74
    act2 = tononi_complexity(bigger, FULL_GATE_SET, active_only=True).complexity
    assert act2 == pytest.approx(full, abs=1e-12)


def test_sampled_estimator_near_exact():
    rng = split_stream(41, 2)
    params = cgp_params(3, 9, 6)
    g = random_genotype(params, rng)
    exact = tononi_complexity(g, FULL_GATE_SET)
    approx = tononi_complexity(g, FULL_GATE_SET, max_exact_gates=4,
                               subset_samples=400, rng=split_stream(41, 3))
    assert not approx.exact
    assert approx.complexity == pytest.approx(exact.complexity, abs=0.15)


def test_sampling_requires_rng():
    params = cgp_params(3, 9, 6)
    g = random_genotype(params, split_stream(41, 4))
    with pytest.raises(ValidationError):
        tononi_complexity(g, FULL_GATE_SET, max_exact_gates=4, subset_samples=10)


def test_phenotype_complexity_estimate(tiny_params):
    est = tononi_complexity_phenotype(Phenotype(0x6, 2), tiny_params, EVOLUTION,
                                      4, None, split_stream(41, 5))
    assert est.k_achieved == 4
    assert est.value >= 0.0


def test_kolmogorov_pins():
    params = cgp_params(2, 4, 4)
    cases = {0x9: 2, 0x8: 1, 0x6: 1, 0x0: 1}
    for bits, want in cases.items():
        r = kolmogorov_complexity(Phenotype(bits, 2), params,
                                  exhaustive_bound=10**8)
        assert r.value == want
        assert r.exact
        # the witness is a checked construction of the right size
        assert r.witness.n_gates == want
        assert output_bits(r.witness, params.gate_set) == bits


def test_kolmogorov_lgp():
    params = lgp_params(2, 4, 2)
    r = kolmogorov_complexity(Phenotype(0x6, 2), params, exhaustive_bound=10**8)
    assert r.value == 1
    assert len(r.witness.instructions) == 1


def test_kolmogorov_search_cap():
    params = cgp_params(2, 4, 4)
    with pytest.raises(SearchExhaustedError):
        kolmogorov_complexity(Phenotype(0x9, 2), params, max_gates=1,
                              exhaustive_bound=10**8)


def test_kolmogorov_epochal_fallback():
    # force the stochastic path with a tiny exhaustive bound; a 1-gate
    # witness would still be exact (no smaller circuits exist), so probe
    # a 2-gate phenotype where the missing m=1 sweep blocks the proof
    params = cgp_params(2, 6, 6)
    r = kolmogorov_complexity(Phenotype(0x9, 2), params, attempts=5,
                              exhaustive_bound=10, rng=split_stream(41, 6))
    assert r.value == 2
    assert not r.exact
    assert output_bits(r.witness, params.gate_set) == 0x9
    with pytest.raises(ValidationError):
        kolmogorov_complexity(Phenotype(0x9, 2), params, exhaustive_bound=10)


def test_minimum_gate_profile_matches_single_queries():
    params = cgp_params(2, 4, 4)
    targets = [Phenotype(b, 2) for b in range(16)]
    profile = minimum_gate_profile(params, targets, exhaustive_bound=10**8)
    assert set(profile) == set(range(16))
    for bits, result in profile.items():
        single = kolmogorov_complexity(Phenotype(bits, 2), params,
                                       exhaustive_bound=10**8)
        assert result.value == single.value
        assert result.exact and single.exact
        assert output_bits(result.witness, params.gate_set) == bits


def test_minimum_gate_profile_nontrivial_values():
    params = cgp_params(2, 4, 4)
    profile = minimum_gate_profile(params, exhaustive_bound=10**8)
    values = {bits: r.value for bits, r in profile.items()}
    # contradiction/tautology and all single-gate tables need one gate;
    # identity-like tables are free only through wiring, so K=1 as well
    assert values[0x9] == 2  # XNOR needs two gates in this basis
    assert values[0xB] == 2
    assert max(values.values()) == 2
    assert min(values.values()) == 1
