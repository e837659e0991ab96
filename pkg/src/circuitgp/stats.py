"""Correlation, density, and frequency-vs-complexity fitting helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as scipy_stats

from .errors import UndefinedCorrelationError, ValidationError


def _clean_pairs(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    if len(x) != len(y):
        raise ValidationError("column lengths differ")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    keep = ~(np.isnan(xa) | np.isnan(ya))
    return xa[keep], ya[keep]


def correlate(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, int]:
    """(pearson, spearman, n) over complete pairs; ranks tie-averaged."""
    xa, ya = _clean_pairs(x, y)
    n = len(xa)
    if n < 3:
        raise ValidationError(f"need at least 3 complete pairs, got {n}")
    if np.ptp(xa) == 0 or np.ptp(ya) == 0:
        raise UndefinedCorrelationError("correlation undefined for a constant column")
    pearson = scipy_stats.pearsonr(xa, ya).statistic
    spearman = scipy_stats.spearmanr(xa, ya).statistic
    return float(pearson), float(spearman), n


def density_histogram(values: Sequence[float], bins: int) -> list[tuple[float, float]]:
    """(bin_center, fraction) pairs over equal-width bins spanning the data.

    Fractions sum to 1; a degenerate all-equal sample lands in one bin.
    """
    if bins < 1:
        raise ValidationError("bins must be at least 1")
    va = np.asarray(list(values), dtype=float)
    if va.size == 0:
        raise ValidationError("empty table")
    lo, hi = float(va.min()), float(va.max())
    if lo == hi:
        hi = lo + 1.0
    counts, edges = np.histogram(va, bins=bins, range=(lo, hi))
    centers = (edges[:-1] + edges[1:]) / 2
    fractions = counts / va.size
    return [(float(c), float(f)) for c, f in zip(centers, fractions)]


@dataclass(frozen=True)
class DingleFit:
    """Parameters of the frequency bound P(x) <= 2^(-a*K(x) - b)."""

    a: float
    b: float
    spearman: float
    n_points: int


def dingle_fit(frequencies: Sequence[float], k_values: Sequence[int]) -> DingleFit:
    """Least-squares fit of log2(frequency) against the minimum gate count.

    Zero-frequency points are dropped (their log is undefined). With the
    fitted line log2 P = s*K + c, the bound constants are a = -s, b = -c.
    """
    if len(frequencies) != len(k_values):
        raise ValidationError("column lengths differ")
    pairs = [(k, f) for k, f in zip(k_values, frequencies) if f > 0]
    if len(pairs) < 3:
        raise ValidationError(f"need at least 3 nonzero-frequency points, got {len(pairs)}")
    ks = np.asarray([k for k, _ in pairs], dtype=float)
    logf = np.asarray([math.log2(f) for _, f in pairs], dtype=float)
    if np.ptp(ks) == 0:
        raise UndefinedCorrelationError("fit undefined: all gate counts equal")
    slope, intercept = np.polyfit(ks, logf, 1)
    spearman = float(scipy_stats.spearmanr(logf, ks).statistic)
    return DingleFit(a=float(-slope), b=float(-intercept),
                     spearman=spearman, n_points=len(pairs))
