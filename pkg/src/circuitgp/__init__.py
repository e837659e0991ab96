"""Genotype-phenotype maps of feed-forward logic circuits.

Genotypes are small circuits over AND/OR/NAND/NOR/XOR in either a
Cartesian (CGP) or a linear (LGP) encoding; a phenotype is the truth
table the circuit computes, packed into an int. The package measures
redundancy, robustness, evolvability, information complexity, and
minimum gate counts over that map, exactly where enumeration is
feasible and by seeded sampling elsewhere.
"""

from .circuits import (
    MAX_INPUTS,
    CgpGenotype,
    CgpNode,
    GateStateMatrix,
    Genotype,
    LgpGenotype,
    LgpInstruction,
    Phenotype,
    active_gate_rows,
    active_instruction_rows,
    cgp_gate_states,
    cgp_input_floor,
    evaluate,
    evaluate_cgp,
    evaluate_lgp,
    format_phenotype_bits,
    hamming_bits,
    lgp_register_trace,
    max_levels_back,
    output_bits,
    phenotype_digits,
    standard_contexts,
    table_mask,
    table_width,
)
from .complexity import (
    KolmogorovResult,
    TononiResult,
    kolmogorov_complexity,
    matrix_entropy,
    minimum_gate_profile,
    mutual_information,
    tononi_complexity,
    tononi_complexity_left_form,
    tononi_complexity_phenotype,
)
from .errors import (
    CircuitGpError,
    CircuitParseError,
    CircuitStructureError,
    PartialResultError,
    ResourceLimitError,
    SearchExhaustedError,
    UndefinedCorrelationError,
    ValidationError,
)
from .evolve import (
    EpochalOutcome,
    EpochalResult,
    WalkResult,
    default_max_steps,
    epochal_evolve,
    neutral_walk,
)
from .gates import (
    FULL_GATE_SET,
    NO_XOR_GATE_SET,
    GateFn,
    GateSet,
    apply_gate,
    gate_set_by_name,
    gate_set_name,
)
from .metrics import (
    DEFAULT_K,
    DESK_K,
    EVOLUTION,
    SAMPLING,
    PhenotypeEstimate,
    PhenotypeRecord,
    RankEntry,
    RankTable,
    RedundancyTable,
    evolved_neutral_genotypes,
    genotype_evolvability,
    genotype_robustness,
    merge_redundancy,
    neighbor_phenotype_bits,
    neutral_genotypes,
    phenotype_evolvability,
    phenotype_robustness,
    rank_from_counts,
    rank_table,
    sample_redundancy,
    sampled_neutral_genotypes,
)
from .mutation import (
    MutationLocus,
    enumerate_neighbors,
    list_mutable_loci,
    neighborhood_size,
    point_mutate,
)
from .oracle import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationSpec,
    ExactMapSummary,
    enumerate_space,
    exact_map_summary,
    flat_index,
    genotype_at,
)
from .params import (
    CGP_4IN,
    LGP_4IN,
    MAX_SEED,
    PRESETS,
    ChromosomeParams,
    cgp_params,
    lgp_params,
    random_genotype,
    split_stream,
)
from .runner import (
    phenotype_suite,
    sample_redundancy_sharded,
    shard_layout,
    structural_records,
)
from .stats import DingleFit, correlate, density_histogram, dingle_fit
from .textio import format_circuit, parse_circuit

__version__ = "0.1.0"
