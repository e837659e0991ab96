"""Static figures from circuitgp CSV artifacts.

Reads only the documented CSV shapes (metadata lines prefixed with '#',
then a header row) and renders three figure kinds with matplotlib:

- rank: frequency-ranked series, logarithmic y
- scatter: one metric against another from a phenotype table
- density: normalized histogram of one column

Multiple input files overlay as separate series on shared axes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from matplotlib.figure import Figure

__all__ = [
    "DataError",
    "FigureSpec",
    "RenderReport",
    "Table",
    "load_table",
    "render",
    "standard_figures",
]

KINDS = ("rank", "scatter", "density")


class DataError(Exception):
    """Input table cannot support the requested figure."""


@dataclass(frozen=True)
class Table:
    path: str
    meta: dict[str, str]
    header: tuple[str, ...]
    rows: tuple[dict[str, str], ...]

    def column(self, name: str) -> list[float]:
        """Numeric values of one column, skipping empty cells."""
        if name not in self.header:
            raise DataError(f"{self.path} has no column {name!r}")
        out = []
        for row in self.rows:
            cell = row[name]
            if cell == "":
                continue
            try:
                out.append(float(cell))
            except ValueError:
                # phenotype ids are hex; tolerate them as x for scatters
                out.append(float(int(cell, 16)))
        return out

    def columns(self, x: str, y: str) -> tuple[list[float], list[float]]:
        """Paired numeric values, dropping rows where either cell is empty."""
        for name in (x, y):
            if name not in self.header:
                raise DataError(f"{self.path} has no column {name!r}")
        xs, ys = [], []
        for row in self.rows:
            if row[x] == "" or row[y] == "":
                continue
            xs.append(float(row[x]))
            ys.append(float(row[y]))
        return xs, ys


def load_table(path: str | Path) -> Table:
    meta: dict[str, str] = {}
    try:
        with open(path, newline="") as fh:
            data_lines = []
            for line in fh:
                if line.startswith("#"):
                    key, _, value = line[1:].partition(":")
                    meta[key.strip()] = value.strip()
                else:
                    data_lines.append(line)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    reader = csv.DictReader(data_lines)
    if reader.fieldnames is None:
        raise DataError(f"{path} is empty")
    rows = tuple(reader)
    if not rows:
        raise DataError(f"{path} has a header but no rows")
    return Table(str(path), meta, tuple(reader.fieldnames), rows)


@dataclass(frozen=True)
class FigureSpec:
    """One figure: what kind, which files, which columns, where to write."""

    kind: str
    inputs: tuple[str, ...]
    out: str
    x: str | None = None
    y: str | None = None
    labels: tuple[str, ...] = ()
    xlabel: str | None = None
    ylabel: str | None = None
    bins: int = 20

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError("one label per input, or none")
        if self.kind == "scatter" and not (self.x and self.y):
            raise ValueError("scatter needs --x and --y")
        if self.kind == "density" and not self.x:
            raise ValueError("density needs --x")
        if self.bins < 1:
            raise ValueError("bins must be positive")


@dataclass(frozen=True)
class RenderReport:
    path: str
    n_series: int
    points_per_series: tuple[int, ...] = field(default_factory=tuple)


def _series_labels(spec: FigureSpec) -> list[str]:
    if spec.labels:
        return list(spec.labels)
    return [Path(p).stem for p in spec.inputs]


def render(spec: FigureSpec) -> RenderReport:
    """Draw the figure and write it to spec.out.

    All inputs are validated before anything is written, so a data error
    never leaves a file behind.
    """
    tables = [load_table(p) for p in spec.inputs]
    x = spec.x or ("rank" if spec.kind == "rank" else None)
    y = spec.y or ("count" if spec.kind == "rank" else None)

    series: list[tuple[list[float], list[float] | None]] = []
    for table in tables:
        if spec.kind == "density":
            values = table.column(x)
            if not values:
                raise DataError(f"{table.path}: no usable values in {x!r}")
            series.append((values, None))
        else:
            xs, ys = table.columns(x, y)
            if not xs:
                raise DataError(f"{table.path}: no complete ({x!r}, {y!r}) pairs")
            series.append((xs, ys))

    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.subplots()
    for label, (xs, ys) in zip(_series_labels(spec), series):
        if spec.kind == "rank":
            ax.plot(xs, ys, marker=".", linewidth=1.0, label=label)
        elif spec.kind == "scatter":
            ax.scatter(xs, ys, s=14, alpha=0.8, label=label)
        else:
            ax.hist(xs, bins=spec.bins, density=True, histtype="step", label=label)
    if spec.kind == "rank":
        ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or x)
    ax.set_ylabel(spec.ylabel or (y if y else "density"))
    if len(series) > 1 or spec.labels:
        ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out, dpi=120)
    return RenderReport(spec.out, len(series),
                        tuple(len(xs) for xs, _ in series))


def standard_figures(pheno_csv: str, rank_csvs: list[str],
                     out_dir: str | Path) -> list[FigureSpec]:
    """The five stock figures for one experiment's artifacts."""
    out = Path(out_dir)
    return [
        FigureSpec("rank", tuple(rank_csvs), str(out / "rank.png")),
        FigureSpec("scatter", (pheno_csv,), str(out / "robustness.png"),
                   x="log10_redundancy", y="robustness"),
        FigureSpec("scatter", (pheno_csv,), str(out / "evolvability.png"),
                   x="robustness", y="evolvability_evo"),
        FigureSpec("density", (pheno_csv,), str(out / "complexity_density.png"),
                   x="tononi"),
        FigureSpec("scatter", (pheno_csv,), str(out / "complexity_scatter.png"),
                   x="tononi", y="evolvability_evo"),
    ]
