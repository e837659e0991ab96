"""CSV emission and ingestion with byte-stable formatting.

Every output starts with `#`-prefixed metadata lines (config hash, seed,
version - never timestamps), then the pinned header, then rows. Reals are
printed with 6 significant digits, phenotypes in canonical hex, and the
line terminator is always a bare newline, so re-running a configuration
reproduces files byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from typing import Iterable, Mapping, Sequence

from .circuits import Phenotype, format_phenotype_bits, table_width
from .errors import ValidationError
from .evolve import EpochalResult, WalkResult
from .metrics import PhenotypeRecord, RankTable, RedundancyTable

VERSION = "0.1.0"

REDUNDANCY_HEADER = ("phenotype", "count", "total_samples")
RANK_HEADER = ("rank", "phenotype", "count", "log10_redundancy")
PHENO_HEADER = ("phenotype", "log10_redundancy", "robustness", "evolvability_evo",
                "evolvability_samp", "tononi", "kolmogorov", "k_exact")
WALK_HEADER = ("step", "accepted", "phenotype")
EPOCHAL_HEADER = ("step", "hamming_distance", "phenotype")

# Full per-phenotype row listings are emitted only up to this arity;
# above it (2^16+ phenotypes) only represented rows are written.
FULL_LISTING_MAX_INPUTS = 4


def config_hash(config: Mapping) -> str:
    """Stable 12-hex-digit digest of a JSON-serializable configuration."""
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def format_real(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x), ".6g")


def format_int(x: int | bool | None) -> str:
    if x is None:
        return ""
    return str(int(x))


def render_table(header: Sequence[str], rows: Iterable[Sequence[str]],
                 meta: Mapping[str, object]) -> str:
    """Render one table; metadata keys are emitted sorted for stability."""
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}: {meta[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(list(row))
    return buf.getvalue()


def write_table(path, header: Sequence[str], rows: Iterable[Sequence[str]],
                meta: Mapping[str, object]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_table(header, rows, meta))


def read_table(path) -> tuple[dict[str, str], list[str], list[dict[str, str]]]:
    """Parse (metadata, header, rows-as-dicts) from a table written above.

    Comment lines are handled as raw text before any CSV quoting rules
    apply, since metadata values (e.g. params JSON) may contain commas.
    """
    meta: dict[str, str] = {}
    data_lines: list[str] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(":")
                meta[key.strip()] = value.strip()
                continue
            data_lines.append(line)
    if not data_lines:
        raise ValidationError(f"no header row in {path}")
    parsed = list(csv.reader(data_lines))
    header = parsed[0]
    rows = [dict(zip(header, record)) for record in parsed[1:]]
    return meta, header, rows


def redundancy_rows(table: RedundancyTable) -> list[tuple[str, str, str]]:
    """All-phenotype rows for small arities, represented-only above."""
    n = table.params.n_inputs
    total = str(table.total_samples)

    def row(bits: int, count: int) -> tuple[str, str, str]:
        return (format_phenotype_bits(bits, n), str(count), total)

    if n <= FULL_LISTING_MAX_INPUTS:
        space = 1 << table_width(n)
        return [row(b, table.counts.get(b, 0)) for b in range(space)]
    return [row(b, c) for b, c in sorted(table.counts.items())]


def rank_rows(table: RankTable) -> list[tuple[str, str, str, str]]:
    return [
        (str(e.rank), str(e.phenotype), str(e.count), format_real(e.log10_redundancy))
        for e in table.entries
    ]


def pheno_rows(records: Iterable[PhenotypeRecord]) -> list[tuple[str, ...]]:
    return [
        (
            str(r.phenotype),
            format_real(r.log10_redundancy),
            format_real(r.robustness),
            format_int(r.evolvability_evo),
            format_int(r.evolvability_samp),
            format_real(r.tononi),
            format_int(r.kolmogorov),
            format_int(r.k_exact),
        )
        for r in records
    ]


def walk_rows(result: WalkResult, phenotype: Phenotype) -> list[tuple[str, str, str]]:
    if result.acceptance_log is None:
        raise ValidationError("walk was run without trace recording")
    hex_p = str(phenotype)
    return [
        (str(step), format_int(ok), hex_p)
        for step, ok in enumerate(result.acceptance_log, start=1)
    ]


def epochal_rows(result: EpochalResult, n_inputs: int) -> list[tuple[str, str, str]]:
    if result.distance_trace is None:
        raise ValidationError("epochal run was made without trace recording")
    return [
        (str(step), str(dist), format_phenotype_bits(bits, n_inputs))
        for step, dist, bits in result.distance_trace
    ]


def parse_pheno_records(path) -> list[PhenotypeRecord]:
    """Read a pheno.csv back into records; empty cells become None.

    Arity comes from the `# inputs:` metadata line when present, else from
    the hex width (which assumes at least 2 inputs).
    """
    meta, header, rows = read_table(path)
    if list(header) != list(PHENO_HEADER):
        raise ValidationError(f"unexpected pheno.csv header: {header}")
    n_meta = int(meta["inputs"]) if "inputs" in meta else None
    records = []
    for row in rows:
        records.append(
            PhenotypeRecord(
                phenotype=_phenotype_from_hex(row["phenotype"], n_meta),
                log10_redundancy=_opt_float(row["log10_redundancy"]),
                robustness=_opt_float(row["robustness"]),
                evolvability_evo=_opt_int(row["evolvability_evo"]),
                evolvability_samp=_opt_int(row["evolvability_samp"]),
                tononi=_opt_float(row["tononi"]),
                kolmogorov=_opt_int(row["kolmogorov"]),
                k_exact=_opt_bool(row["k_exact"]),
            )
        )
    return records


def _phenotype_from_hex(text: str, n: int | None) -> Phenotype:
    if n is None:
        digits = len(text) - 2 if text.startswith("0x") else len(text)
        width = digits * 4
        n = max(2, width.bit_length() - 1)
    return Phenotype.from_hex(text, n)


def _opt_float(text: str) -> float | None:
    return float(text) if text else None


def _opt_int(text: str) -> int | None:
    return int(text) if text else None


def _opt_bool(text: str) -> bool | None:
    return bool(int(text)) if text else None
