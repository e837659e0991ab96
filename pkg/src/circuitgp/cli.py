"""Command-line toolkit for the circuit genotype-phenotype map.

Every artifact-producing subcommand embeds a config hash, the master
seed, and the tool version in `#` comment lines, and derives all
randomness by splitting the master seed with fixed keys, so a command
line reproduces its output byte for byte at any worker count.

Exit codes: 0 success, 1 validation error, 2 partial result (budgets
exhausted before the requested sample counts), 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import csvio
from types import SimpleNamespace

from .circuits import Phenotype, format_phenotype_bits, output_bits, table_width
from .complexity import (
    minimum_gate_profile,
    tononi_complexity,
    tononi_complexity_phenotype,
)
from .errors import (
    CircuitGpError,
    PartialResultError,
    ResourceLimitError,
    ValidationError,
)
from .evolve import EpochalOutcome, default_max_steps, epochal_evolve, neutral_walk
from .gates import gate_set_by_name, gate_set_name
from .metrics import (
    DEFAULT_K,
    EVOLUTION,
    SAMPLING,
    PhenotypeEstimate,
    RedundancyTable,
    neutral_genotypes,
    phenotype_evolvability,
    phenotype_robustness,
    rank_from_counts,
)
from .oracle import EnumerationSpec, exact_map_summary
from .params import ChromosomeParams, cgp_params, lgp_params, split_stream
from .runner import (
    DEFAULT_SHARD_SIZE,
    DOMAIN_EPOCHAL,
    DOMAIN_EVOLVED_SOURCE,
    DOMAIN_KOLMOGOROV,
    DOMAIN_SAMPLED_SOURCE,
    DOMAIN_WALK,
    random_genotype_complexities,
    sample_redundancy_sharded,
    shard_layout,
)
from .stats import correlate, density_histogram, dingle_fit
from .textio import parse_circuit

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARTIAL = 2
EXIT_RESOURCE = 3

WORKERS_ENV = "CIRCUITGP_WORKERS"


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures follow the exit-code contract."""

    def error(self, message):
        raise ValidationError(message)


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _add_params_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--repr", choices=("cgp", "lgp"), default="cgp")
    sub.add_argument("--inputs", type=int, metavar="N")
    sub.add_argument("--gates", type=int, metavar="M", help="CGP gate count")
    sub.add_argument("--levels-back", type=int, metavar="LB",
                     help="CGP connectivity range (default: unrestricted)")
    sub.add_argument("--instructions", type=int, metavar="L",
                     help="LGP instruction count")
    sub.add_argument("--calc-registers", type=int, default=2, metavar="R")
    sub.add_argument("--gate-set", default="full", metavar="NAME",
                     help="full or no_xor")


def _params_from_args(args) -> ChromosomeParams:
    gs = gate_set_by_name(args.gate_set)
    if args.inputs is None:
        raise ValidationError("--inputs is required")
    if args.repr == "cgp":
        if args.gates is None:
            raise ValidationError("--gates is required for --repr cgp")
        return cgp_params(args.inputs, args.gates, args.levels_back, gate_set=gs)
    if args.instructions is None:
        raise ValidationError("--instructions is required for --repr lgp")
    return lgp_params(args.inputs, args.instructions, args.calc_registers, gate_set=gs)


def _parse_phenotypes(spec: str, n_inputs: int) -> list[int]:
    space = 1 << table_width(n_inputs)
    if spec == "all":
        return list(range(space))
    bits_list = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            bits = int(item, 0)
        except ValueError:
            raise ValidationError(f"bad phenotype value {item!r}") from None
        if not 0 <= bits < space:
            raise ValidationError(f"phenotype {item} out of range for {n_inputs} inputs")
        bits_list.append(bits)
    if not bits_list:
        raise ValidationError("empty phenotype list")
    return bits_list


def _auto_repr(text: str) -> str:
    return "cgp" if text.lstrip().startswith("circuit") else "lgp"


def _circuit_from_args(args) -> tuple:
    gs = gate_set_by_name(args.gate_set)
    g = parse_circuit(
        args.circuit,
        _auto_repr(args.circuit),
        levels_back=args.levels_back,
        n_inputs=args.inputs,
        n_calc_registers=args.calc_registers,
    )
    return g, gs


def _write(args, header, rows, meta) -> None:
    csvio.write_table(args.out, header, rows, meta)
    print(f"wrote {args.out}: {len(rows)} rows")


def _params_meta(params: ChromosomeParams) -> str:
    return json.dumps(params.describe(), sort_keys=True, separators=(",", ":"))


# --- redundancy / rank ---------------------------------------------------


def _redundancy_config(params, args) -> dict:
    return {
        "command": "redundancy",
        "params": params.describe(),
        "samples": args.samples,
        "seed": args.seed,
        "shard_size": args.shard_size,
    }


def cmd_redundancy(args) -> int:
    params = _params_from_args(args)
    shard_range = None
    n_shards = len(shard_layout(args.samples, args.shard_size))
    if args.shard_range:
        lo, _, hi = args.shard_range.partition(":")
        try:
            shard_range = (int(lo), int(hi))
        except ValueError:
            raise ValidationError(f"bad shard range {args.shard_range!r}") from None
    table = sample_redundancy_sharded(
        params, args.samples, args.seed, workers=args.workers,
        shard_size=args.shard_size, shard_range=shard_range,
    )
    effective = shard_range or (0, n_shards)
    meta = {
        "config": csvio.config_hash(_redundancy_config(params, args)),
        "inputs": params.n_inputs,
        "n_shards": n_shards,
        "params": _params_meta(params),
        "samples": args.samples,
        "seed": args.seed,
        "shard_range": f"{effective[0]}:{effective[1]}",
        "shard_size": args.shard_size,
        "unrepresented": table.n_unrepresented(),
        "version": csvio.VERSION,
    }
    _write(args, csvio.REDUNDANCY_HEADER, csvio.redundancy_rows(table), meta)
    return EXIT_OK


def cmd_rank(args) -> int:
    if args.from_file:
        meta_in, _, rows = csvio.read_table(args.from_file)
        if "inputs" not in meta_in:
            raise ValidationError(f"{args.from_file} lacks an inputs metadata line")
        n = int(meta_in["inputs"])
        counts = {}
        total = 0
        for row in rows:
            count = int(row["count"])
            if count:
                counts[int(row["phenotype"], 16)] = count
            total = int(row["total_samples"])
        table = rank_from_counts(counts, n, total)
        meta = {
            "config": meta_in.get("config", "-"),
            "inputs": n,
            "samples": total,
            "seed": meta_in.get("seed", "-"),
            "unrepresented": table.n_unrepresented,
            "version": csvio.VERSION,
        }
    else:
        if args.samples is None:
            raise ValidationError("rank needs --samples or --from")
        params = _params_from_args(args)
        red = sample_redundancy_sharded(
            params, args.samples, args.seed, workers=args.workers,
            shard_size=args.shard_size,
        )
        table = rank_from_counts(red.counts, params.n_inputs, red.total_samples)
        config = {
            "command": "rank",
            "params": params.describe(),
            "samples": args.samples,
            "seed": args.seed,
            "shard_size": args.shard_size,
        }
        meta = {
            "config": csvio.config_hash(config),
            "inputs": params.n_inputs,
            "samples": args.samples,
            "seed": args.seed,
            "unrepresented": table.n_unrepresented,
            "version": csvio.VERSION,
        }
    _write(args, csvio.RANK_HEADER, csvio.rank_rows(table), meta)
    return EXIT_OK


# --- phenotype-level estimators -------------------------------------------


def _source_domain(method: str) -> int:
    return DOMAIN_EVOLVED_SOURCE if method == EVOLUTION else DOMAIN_SAMPLED_SOURCE


def _phenotype_table_meta(command: str, params, args) -> dict:
    config = {
        "command": command,
        "params": params.describe(),
        "method": args.method,
        "k": args.k,
        "budget": args.budget,
        "seed": args.seed,
    }
    return {
        "config": csvio.config_hash(config),
        "inputs": params.n_inputs,
        "k": args.k,
        "method": args.method,
        "seed": args.seed,
        "version": csvio.VERSION,
    }


def cmd_robustness(args) -> int:
    params = _params_from_args(args)
    phens = _parse_phenotypes(args.phenotypes, params.n_inputs)
    rows = []
    short = False
    for bits in phens:
        p = Phenotype(bits, params.n_inputs)
        rng = split_stream(args.seed, _source_domain(args.method), bits)
        try:
            genotypes = neutral_genotypes(p, params, args.method, args.k,
                                          args.budget, rng)
        except PartialResultError as err:
            genotypes = list(err.partial)
            short = True
        if genotypes:
            est = phenotype_robustness(p, genotypes, len(genotypes),
                                       params.gate_set, method=args.method)
        else:
            est = PhenotypeEstimate(None, 0, args.method)
        rows.append((str(p), csvio.format_real(est.value),
                     str(est.k_achieved), est.method))
    meta = _phenotype_table_meta("robustness", params, args)
    _write(args, ("phenotype", "robustness", "k_achieved", "method"), rows, meta)
    if short:
        print("warning: some phenotypes fell short of the requested k", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_evolvability(args) -> int:
    params = _params_from_args(args)
    phens = _parse_phenotypes(args.phenotypes, params.n_inputs)
    column = "evolvability_evo" if args.method == EVOLUTION else "evolvability_samp"
    rows = []
    short = False
    for bits in phens:
        p = Phenotype(bits, params.n_inputs)
        rng = split_stream(args.seed, _source_domain(args.method), bits)
        try:
            value = phenotype_evolvability(p, params, args.method, args.k,
                                           args.budget, rng,
                                           include_self=args.include_self)
            achieved = args.k
        except PartialResultError as err:
            value = err.partial
            achieved = err.achieved
            short = True
        rows.append((str(p), csvio.format_int(value), str(achieved), args.method))
    meta = _phenotype_table_meta("evolvability", params, args)
    _write(args, ("phenotype", column, "k_achieved", "method"), rows, meta)
    if short:
        print("warning: some phenotypes fell short of the requested k", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_tononi(args) -> int:
    if args.circuit is not None and args.random is not None:
        raise ValidationError("--circuit and --random are mutually exclusive")
    if args.circuit is not None:
        g, gs = _circuit_from_args(args)
        result = tononi_complexity(g, gs, active_only=args.active_only)
        print(csvio.format_real(result.complexity))
        return EXIT_OK
    if args.random is not None:
        params = _params_from_args(args)
        values = random_genotype_complexities(params, args.random, args.seed,
                                              active_only=args.active_only)
        config = {
            "command": "tononi-random",
            "params": params.describe(),
            "count": args.random,
            "seed": args.seed,
            "active_only": args.active_only,
        }
        meta = {
            "config": csvio.config_hash(config),
            "count": args.random,
            "inputs": params.n_inputs,
            "seed": args.seed,
            "version": csvio.VERSION,
        }
        rows = [(str(i), csvio.format_real(v)) for i, v in enumerate(values)]
        _write(args, ("index", "tononi"), rows, meta)
        return EXIT_OK
    params = _params_from_args(args)
    phens = _parse_phenotypes(args.phenotypes, params.n_inputs)
    rows = []
    short = False
    for bits in phens:
        p = Phenotype(bits, params.n_inputs)
        rng = split_stream(args.seed, _source_domain(args.method), bits)
        try:
            est = tononi_complexity_phenotype(p, params, args.method, args.k,
                                              args.budget, rng,
                                              active_only=args.active_only)
        except PartialResultError as err:
            est = err.partial
            short = True
        rows.append((str(p), csvio.format_real(est.value),
                     str(est.k_achieved), est.method))
    meta = _phenotype_table_meta("tononi", params, args)
    _write(args, ("phenotype", "tononi", "k_achieved", "method"), rows, meta)
    if short:
        print("warning: some phenotypes fell short of the requested k", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_kolmogorov(args) -> int:
    params = _params_from_args(args)
    phens = _parse_phenotypes(args.phenotypes, params.n_inputs)
    rng = split_stream(args.seed, DOMAIN_KOLMOGOROV)
    profile = minimum_gate_profile(
        params,
        [Phenotype(b, params.n_inputs) for b in phens],
        attempts=args.attempts,
        step_budget=args.step_budget,
        rng=rng,
        exhaustive_bound=args.exhaustive_bound,
        max_gates=args.max_gates,
        restricted_levels_back=args.restricted_levels_back,
        allow_missing=True,
    )
    rows = []
    missing = 0
    for bits in phens:
        result = profile.get(bits)
        if result is None:
            missing += 1
            rows.append((format_phenotype_bits(bits, params.n_inputs), "", ""))
        else:
            rows.append((
                format_phenotype_bits(bits, params.n_inputs),
                str(result.value),
                csvio.format_int(result.exact),
            ))
    config = {
        "command": "kolmogorov",
        "params": params.describe(),
        "attempts": args.attempts,
        "step_budget": args.step_budget,
        "max_gates": args.max_gates,
        "exhaustive_bound": args.exhaustive_bound,
        "restricted_levels_back": args.restricted_levels_back,
        "seed": args.seed,
    }
    meta = {
        "attempts": args.attempts,
        "config": csvio.config_hash(config),
        "inputs": params.n_inputs,
        "max_gates": args.max_gates,
        "seed": args.seed,
        "version": csvio.VERSION,
    }
    _write(args, ("phenotype", "kolmogorov", "k_exact"), rows, meta)
    if missing:
        print(f"warning: {missing} phenotypes unresolved at {args.max_gates} gates",
              file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


# --- walks ----------------------------------------------------------------


def cmd_neutral_walk(args) -> int:
    g, gs = _circuit_from_args(args)
    rng = split_stream(args.seed, DOMAIN_WALK)
    result = neutral_walk(g, gs, args.steps, rng, record_trace=True)
    p = Phenotype(output_bits(g, gs), g.n_inputs)
    config = {
        "command": "neutral-walk",
        "circuit": args.circuit,
        "gate_set": gate_set_name(gs),
        "steps": args.steps,
        "seed": args.seed,
    }
    meta = {
        "accepted": result.accepted_steps,
        "config": csvio.config_hash(config),
        "inputs": g.n_inputs,
        "seed": args.seed,
        "steps": args.steps,
        "version": csvio.VERSION,
    }
    _write(args, csvio.WALK_HEADER, csvio.walk_rows(result, p), meta)
    print(f"accepted {result.accepted_steps}/{result.steps_taken} neutral steps")
    return EXIT_OK


def cmd_epochal(args) -> int:
    params = _params_from_args(args)
    try:
        target_bits = int(args.target, 0)
    except ValueError:
        raise ValidationError(f"bad target phenotype {args.target!r}") from None
    if not 0 <= target_bits < (1 << table_width(params.n_inputs)):
        raise ValidationError(f"target {args.target} out of range")
    target = Phenotype(target_bits, params.n_inputs)
    max_steps = args.max_steps or default_max_steps(params.n_inputs)
    rng = split_stream(args.seed, DOMAIN_EPOCHAL)
    result = epochal_evolve(target, params, max_steps, rng, record_trace=True)
    config = {
        "command": "epochal",
        "params": params.describe(),
        "target": str(target),
        "max_steps": max_steps,
        "seed": args.seed,
    }
    meta = {
        "config": csvio.config_hash(config),
        "inputs": params.n_inputs,
        "max_steps": max_steps,
        "outcome": result.outcome.value,
        "seed": args.seed,
        "steps": result.steps_taken,
        "target": str(target),
        "version": csvio.VERSION,
    }
    _write(args, csvio.EPOCHAL_HEADER, csvio.epochal_rows(result, params.n_inputs), meta)
    print(f"{result.outcome.value} after {result.steps_taken} steps")
    return EXIT_OK if result.outcome is EpochalOutcome.FOUND else EXIT_PARTIAL


# --- oracle ---------------------------------------------------------------


def cmd_oracle_enumerate(args) -> int:
    params = _params_from_args(args)
    spec = EnumerationSpec(params, cap=args.cap)
    summary = exact_map_summary(spec, components=args.components,
                                workers=args.workers)
    n = params.n_inputs
    header = ["phenotype", "count", "robustness", "evolvability"]
    if args.components:
        header.append("components")
    if n <= csvio.FULL_LISTING_MAX_INPUTS:
        all_bits = range(1 << table_width(n))
    else:
        all_bits = sorted(b for b, c in summary.counts.items() if c > 0)
    rows = []
    for bits in all_bits:
        count = summary.counts.get(bits, 0)
        row = [
            format_phenotype_bits(bits, n),
            str(count),
            csvio.format_real(summary.robustness.get(bits)),
            csvio.format_int(summary.evolvability.get(bits)),
        ]
        if args.components:
            comps = summary.neutral_components or {}
            row.append(csvio.format_int(comps.get(bits)))
        rows.append(tuple(row))
    config = {
        "command": "oracle-enumerate",
        "params": params.describe(),
        "components": args.components,
    }
    meta = {
        "config": csvio.config_hash(config),
        "inputs": n,
        "params": _params_meta(params),
        "seed": "-",
        "space": summary.space_size,
        "version": csvio.VERSION,
    }
    _write(args, header, rows, meta)
    return EXIT_OK


# --- join / statistics ----------------------------------------------------


def _merge_redundancy_files(paths: list[str], out: str) -> None:
    metas = []
    count_maps = []
    totals = []
    for path in paths:
        meta, header, rows = csvio.read_table(path)
        if list(header) != list(csvio.REDUNDANCY_HEADER):
            raise ValidationError(f"{path} is not a redundancy table")
        metas.append(meta)
        counts = {}
        total = 0
        for row in rows:
            c = int(row["count"])
            if c:
                counts[int(row["phenotype"], 16)] = c
            total = int(row["total_samples"])
        count_maps.append(counts)
        totals.append(total)
    for key in ("config", "params", "samples", "seed", "shard_size", "n_shards",
                "version", "inputs"):
        values = {m.get(key) for m in metas}
        if len(values) != 1:
            raise ValidationError(f"shards disagree on {key}: {sorted(values)}")
    n_shards = int(metas[0]["n_shards"])
    covered = []
    for m in metas:
        lo, _, hi = m["shard_range"].partition(":")
        covered.append((int(lo), int(hi)))
    covered.sort()
    cursor = 0
    for lo, hi in covered:
        if lo != cursor:
            raise ValidationError(
                f"shard ranges do not tile the layout: gap or overlap at {lo}"
            )
        cursor = hi
    if cursor != n_shards:
        raise ValidationError(f"shard ranges cover only {cursor}/{n_shards} shards")
    samples = int(metas[0]["samples"])
    if sum(totals) != samples:
        raise ValidationError(
            f"merged sample count {sum(totals)} != declared budget {samples}"
        )
    merged: dict[int, int] = {}
    for counts in count_maps:
        for bits, c in counts.items():
            merged[bits] = merged.get(bits, 0) + c
    n = int(metas[0]["inputs"])
    width = table_width(n)
    represented = sum(1 for c in merged.values() if c > 0)
    meta = dict(metas[0])
    meta["shard_range"] = f"0:{n_shards}"
    meta["unrepresented"] = (1 << width) - represented
    # the row builder only needs the arity off params
    table = RedundancyTable(SimpleNamespace(n_inputs=n), samples, merged, None)
    csvio.write_table(out, csvio.REDUNDANCY_HEADER, csvio.redundancy_rows(table), meta)
    print(f"wrote {out}: merged {len(paths)} shard files")


_PHENO_COLUMNS = ("log10_redundancy", "robustness", "evolvability_evo",
                  "evolvability_samp", "tononi", "kolmogorov", "k_exact")


def _join_pheno_files(paths: list[str], out: str, n_inputs: int | None) -> None:
    per_phen: dict[int, dict[str, str]] = {}
    inputs_seen = set()
    source_hashes = []
    for path in paths:
        meta, header, rows = csvio.read_table(path)
        if "inputs" in meta:
            inputs_seen.add(int(meta["inputs"]))
        source_hashes.append(meta.get("config", "-"))
        if "phenotype" not in header:
            raise ValidationError(f"{path} has no phenotype column")
        is_redundancy = list(header) == list(csvio.REDUNDANCY_HEADER)
        for row in rows:
            bits = int(row["phenotype"], 16)
            cell = per_phen.setdefault(bits, {})
            if is_redundancy:
                count = int(row["count"])
                if count > 0:
                    cell["log10_redundancy"] = csvio.format_real(math.log10(count))
                continue
            for col in _PHENO_COLUMNS:
                if col in row and row[col] != "":
                    cell[col] = row[col]
    if n_inputs is None:
        if len(inputs_seen) != 1:
            raise ValidationError(
                "cannot infer the input count; pass --inputs or use sources "
                "with consistent inputs metadata"
            )
        n_inputs = inputs_seen.pop()
    elif inputs_seen and inputs_seen != {n_inputs}:
        raise ValidationError("--inputs disagrees with the source files")
    rows_out = []
    for bits in sorted(per_phen):
        cell = per_phen[bits]
        rows_out.append(tuple(
            [format_phenotype_bits(bits, n_inputs)]
            + [cell.get(col, "") for col in _PHENO_COLUMNS]
        ))
    meta = {
        "config": csvio.config_hash({"command": "join", "sources": source_hashes}),
        "inputs": n_inputs,
        "seed": "-",
        "version": csvio.VERSION,
    }
    csvio.write_table(out, csvio.PHENO_HEADER, rows_out, meta)
    print(f"wrote {out}: {len(rows_out)} phenotypes from {len(paths)} sources")


def cmd_join(args) -> int:
    if bool(args.merge_redundancy) == bool(args.pheno):
        raise ValidationError("choose exactly one of --merge-redundancy, --pheno")
    if args.merge_redundancy:
        _merge_redundancy_files(args.inputs_files, args.out)
    else:
        _join_pheno_files(args.inputs_files, args.out, args.inputs)
    return EXIT_OK


def _numeric_column(path: str, column: str) -> list[float]:
    _, header, rows = csvio.read_table(path)
    if column not in header:
        raise ValidationError(f"{path} has no column {column!r}")
    values = []
    for row in rows:
        text = row.get(column, "")
        if text != "":
            values.append(float(text))
    if not values:
        raise ValidationError(f"column {column!r} of {path} has no values")
    return values


def cmd_correlate(args) -> int:
    _, header, rows = csvio.read_table(args.in_file)
    for column in (args.x, args.y):
        if column not in header:
            raise ValidationError(f"{args.in_file} has no column {column!r}")
    xs, ys = [], []
    for row in rows:
        tx, ty = row.get(args.x, ""), row.get(args.y, "")
        if tx != "" and ty != "":
            xs.append(float(tx))
            ys.append(float(ty))
    pearson, spearman, n = correlate(xs, ys)
    print(f"pearson={csvio.format_real(pearson)} "
          f"spearman={csvio.format_real(spearman)} n={n}")
    return EXIT_OK


def cmd_density(args) -> int:
    values = _numeric_column(args.in_file, args.column)
    pairs = density_histogram(values, args.bins)
    config = {
        "command": "density",
        "column": args.column,
        "bins": args.bins,
        "n_values": len(values),
    }
    meta = {
        "bins": args.bins,
        "column": args.column,
        "config": csvio.config_hash(config),
        "seed": "-",
        "version": csvio.VERSION,
    }
    rows = [(csvio.format_real(c), csvio.format_real(d)) for c, d in pairs]
    _write(args, ("bin_center", "density"), rows, meta)
    return EXIT_OK


def cmd_dingle_fit(args) -> int:
    _, header, rows = csvio.read_table(args.redundancy)
    if list(header) != list(csvio.REDUNDANCY_HEADER):
        raise ValidationError(f"{args.redundancy} is not a redundancy table")
    counts = {}
    total = None
    for row in rows:
        total = int(row["total_samples"])
        c = int(row["count"])
        if c:
            counts[int(row["phenotype"], 16)] = c
    _, kheader, krows = csvio.read_table(args.kolmogorov)
    if "kolmogorov" not in kheader:
        raise ValidationError(f"{args.kolmogorov} has no kolmogorov column")
    k_map = {}
    for row in krows:
        if row["kolmogorov"] != "":
            k_map[int(row["phenotype"], 16)] = int(row["kolmogorov"])
    freqs, ks = [], []
    for bits, count in sorted(counts.items()):
        if bits in k_map:
            freqs.append(count / total)
            ks.append(k_map[bits])
    fit = dingle_fit(freqs, ks)
    print(f"a={csvio.format_real(fit.a)} b={csvio.format_real(fit.b)} "
          f"spearman={csvio.format_real(fit.spearman)} n={fit.n_points}")
    if args.out:
        meta = {
            "config": csvio.config_hash({"command": "dingle-fit",
                                         "n_points": fit.n_points}),
            "seed": "-",
            "version": csvio.VERSION,
        }
        rows_out = [(csvio.format_real(fit.a), csvio.format_real(fit.b),
                     csvio.format_real(fit.spearman), str(fit.n_points))]
        csvio.write_table(args.out, ("a", "b", "spearman", "n_points"), rows_out, meta)
        print(f"wrote {args.out}: 1 rows")
    return EXIT_OK


# --- parser wiring ----------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="circuitgp",
                     description="logic-circuit genotype-phenotype map toolkit")
    parser.add_argument("--version", action="version",
                        version=f"circuitgp {csvio.VERSION}")
    subs = parser.add_subparsers(dest="command", required=True)

    def common(sub, default_out):
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--out", default=default_out)
        sub.add_argument("--workers", type=int, default=_default_workers())

    s = subs.add_parser("redundancy", help="sample genotypes, count phenotypes")
    _add_params_flags(s)
    common(s, "redundancy.csv")
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--shard-size", type=int, default=DEFAULT_SHARD_SIZE)
    s.add_argument("--shard-range", metavar="A:B",
                   help="process only shards A..B-1 of the layout")
    s.set_defaults(func=cmd_redundancy)

    s = subs.add_parser("rank", help="order phenotypes by sampled frequency")
    _add_params_flags(s)
    common(s, "rank.csv")
    s.add_argument("--samples", type=int)
    s.add_argument("--shard-size", type=int, default=DEFAULT_SHARD_SIZE)
    s.add_argument("--from", dest="from_file", metavar="REDUNDANCY_CSV",
                   help="rank an existing redundancy table instead of sampling")
    s.set_defaults(func=cmd_rank)

    def estimator_flags(sub):
        sub.add_argument("--phenotypes", default="all",
                         help="'all' or a comma-separated list of values")
        sub.add_argument("--method", choices=(EVOLUTION, SAMPLING),
                         default=EVOLUTION)
        sub.add_argument("--k", type=int, default=DEFAULT_K)
        sub.add_argument("--budget", type=int, default=None,
                         help="per-run step cap (evolution) or total draws (sampling)")

    s = subs.add_parser("robustness", help="phenotype robustness estimates")
    _add_params_flags(s)
    common(s, "robustness.csv")
    estimator_flags(s)
    s.set_defaults(func=cmd_robustness)

    s = subs.add_parser("evolvability", help="phenotype evolvability estimates")
    _add_params_flags(s)
    common(s, "evolvability.csv")
    estimator_flags(s)
    s.add_argument("--include-self", action="store_true")
    s.set_defaults(func=cmd_evolvability)

    s = subs.add_parser("tononi", help="information complexity of circuits")
    _add_params_flags(s)
    common(s, "tononi.csv")
    estimator_flags(s)
    s.add_argument("--circuit", help="print the complexity of one circuit")
    s.add_argument("--random", type=int, metavar="N",
                   help="complexities of N random genotypes")
    s.add_argument("--active-only", action="store_true",
                   help="restrict the state matrix to active gates")
    s.set_defaults(func=cmd_tononi)

    s = subs.add_parser("kolmogorov", help="minimum gate counts per phenotype")
    _add_params_flags(s)
    common(s, "kolmogorov.csv")
    s.add_argument("--phenotypes", default="all")
    s.add_argument("--attempts", type=int, default=10)
    s.add_argument("--step-budget", type=int, default=None)
    s.add_argument("--max-gates", type=int, default=16)
    s.add_argument("--exhaustive-bound", type=int, default=100_000_000)
    s.add_argument("--restricted-levels-back", action="store_true",
                   help="search with the params' levels-back instead of unrestricted")
    s.set_defaults(func=cmd_kolmogorov)

    s = subs.add_parser("neutral-walk", help="random walk over one neutral set")
    common(s, "walk.csv")
    s.add_argument("--circuit", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--gate-set", default="full")
    s.add_argument("--inputs", type=int, default=None)
    s.add_argument("--levels-back", type=int, default=None)
    s.add_argument("--calc-registers", type=int, default=None)
    s.set_defaults(func=cmd_neutral_walk)

    s = subs.add_parser("epochal", help="evolve a random start toward a phenotype")
    _add_params_flags(s)
    common(s, "epochal.csv")
    s.add_argument("--target", required=True, metavar="PHENOTYPE")
    s.add_argument("--max-steps", type=int, default=None)
    s.set_defaults(func=cmd_epochal)

    s = subs.add_parser("oracle-enumerate",
                        help="exact map summary by exhaustive enumeration")
    _add_params_flags(s)
    common(s, "oracle.csv")
    s.add_argument("--components", action="store_true",
                   help="also count neutral-network components")
    s.add_argument("--cap", type=int, default=100_000_000)
    s.set_defaults(func=cmd_oracle_enumerate)

    s = subs.add_parser("join", help="merge shards or build a phenotype table")
    s.add_argument("inputs_files", nargs="+", metavar="CSV")
    s.add_argument("--merge-redundancy", action="store_true")
    s.add_argument("--pheno", action="store_true")
    s.add_argument("--inputs", type=int, default=None)
    s.add_argument("--out", default="pheno.csv")
    s.set_defaults(func=cmd_join)

    s = subs.add_parser("correlate", help="pearson/spearman between two columns")
    s.add_argument("--in", dest="in_file", required=True, metavar="CSV")
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.set_defaults(func=cmd_correlate)

    s = subs.add_parser("density", help="normalized histogram of a column")
    s.add_argument("--in", dest="in_file", required=True, metavar="CSV")
    s.add_argument("--column", required=True)
    s.add_argument("--bins", type=int, default=20)
    s.add_argument("--out", default="density.csv")
    s.set_defaults(func=cmd_density)

    s = subs.add_parser("dingle-fit",
                        help="fit log2 frequency against minimum gate count")
    s.add_argument("--redundancy", required=True, metavar="CSV")
    s.add_argument("--kolmogorov", required=True, metavar="CSV")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_dingle_fit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except PartialResultError as err:
        print(f"partial result: {err}", file=sys.stderr)
        return EXIT_PARTIAL
    except ResourceLimitError as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except CircuitGpError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
