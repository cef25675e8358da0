"""Rank assignment, Pearson/Spearman correlation and the log-binned
degree-distribution fit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centrality import MEASURES, CentralityTable
from .graph import Graph

# presentation order used by the correlation tables
CORRELATION_SERIES = ("degree", "pagerank", "eigenvector", "betweenness",
                      "closeness", "average")


class UndefinedCorrelationError(ValueError):
    """A correlation was requested for a series with zero variance."""


class FitError(ValueError):
    """The log-binned histogram has too few populated bins to fit."""


def fractional_ranks(values: np.ndarray, descending: bool = True) -> np.ndarray:
    """Ranks starting at 1, ties receive the average of their positions."""
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    key = -values if descending else values
    order = np.argsort(key, kind="stable")
    ranks = np.empty(n, dtype=np.float64)
    sorted_key = key[order]
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_key[j + 1] == sorted_key[i]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        ranks[order[i:j + 1]] = avg
        i = j + 1
    return ranks


def label_positions(labels) -> np.ndarray:
    """Lexicographic position of every label, used as a rank tie-breaker."""
    arr = np.asarray(labels)
    pos = np.empty(arr.size, dtype=np.int64)
    pos[np.argsort(arr, kind="stable")] = np.arange(arr.size)
    return pos


def _ordinal_ranks_from_pos(values: np.ndarray, label_pos: np.ndarray,
                            descending: bool = True) -> np.ndarray:
    """Ordinal ranks as float, NaN for NaN inputs (hot path for ensembles)."""
    values = np.asarray(values, dtype=np.float64)
    valued = np.flatnonzero(~np.isnan(values))
    key = -values if descending else values
    order = valued[np.lexsort((label_pos[valued], key[valued]))]
    ranks = np.full(values.size, np.nan)
    ranks[order] = np.arange(1, order.size + 1)
    return ranks


def ordinal_ranks(values: np.ndarray, labels, descending: bool = True) -> np.ndarray:
    """Ranks 1..m with ties broken by label; NaN entries get rank 0."""
    ranks = _ordinal_ranks_from_pos(np.asarray(values, dtype=np.float64),
                                    label_positions(labels), descending)
    return np.where(np.isnan(ranks), 0, ranks).astype(np.int64)


@dataclass(frozen=True, eq=False)
class RankVector:
    """Fractional and ordinal ranks of one value series, best value first."""

    fractional: np.ndarray
    ordinal: np.ndarray
    direction: str = "descending"


def rank_vector(values: np.ndarray, labels) -> RankVector:
    return RankVector(fractional_ranks(values), ordinal_ranks(values, labels))


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Product-moment correlation coefficient."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size or x.size < 2:
        raise ValueError("pearson needs two equal-length series of size >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    vx = (dx * dx).sum()
    vy = (dy * dy).sum()
    if vx == 0.0 or vy == 0.0:
        raise UndefinedCorrelationError("series with zero variance")
    return float((dx * dy).sum() / np.sqrt(vx * vy))


def spearman(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation of the fractional ranks."""
    return pearson(fractional_ranks(x), fractional_ranks(y))


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Pearson and Spearman matrices over the six score series."""

    series: tuple[str, ...]
    pearson: np.ndarray
    spearman: np.ndarray
    population: str
    n: int


def correlation_matrix(table: CentralityTable,
                       population: str = "largest_component",
                       k: int = 35) -> CorrelationMatrix:
    """Correlations between the five rescaled measures and the average.

    ``population`` is either "largest_component" (all scored nodes) or
    "top_k" (the k best nodes by average score).
    """
    if population == "largest_component":
        idx = np.flatnonzero(table.in_lcc)
        pop_name = "largest_component"
    elif population == "top_k":
        idx = table.top_k_indices(k)
        pop_name = f"top_{idx.size}"
    else:
        raise ValueError(f"unknown population {population!r}")
    series = {m: table.rescaled[m][idx] for m in MEASURES}
    series["average"] = table.average[idx]
    m = len(CORRELATION_SERIES)
    pear = np.eye(m)
    spear = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            a = series[CORRELATION_SERIES[i]]
            b = series[CORRELATION_SERIES[j]]
            pear[i, j] = pear[j, i] = pearson(a, b)
            spear[i, j] = spear[j, i] = spearman(a, b)
    return CorrelationMatrix(CORRELATION_SERIES, pear, spear, pop_name, idx.size)


@dataclass(frozen=True, eq=False)
class LogBinnedFit:
    """Power-law fit of a degree histogram rebinned onto geometric bins.

    Degrees are integers, so the density of a bin is its count divided by
    the number of integer degree values the bin covers (absent degrees
    count as zeros) and by ``n_total``; the bin is plotted at the geometric
    mean of those integers.  Normalising by the real-valued bin width
    instead would bias the slope where bins are narrower than the integer
    lattice.
    """

    edges: np.ndarray
    centers: np.ndarray          # geometric mean of the integers in the bin
    densities: np.ndarray        # count / (integers in bin * n_total)
    slope: float
    slope_stderr: float
    r2: float
    ratio: float
    first_edge: float = 1.0


def fit_log_binned(values: np.ndarray, weights: np.ndarray, n_total: float,
                   ratio: float = 1.5) -> LogBinnedFit:
    """Least-squares line through log10(density) vs log10(bin center).

    ``values`` are positive integers (degrees), ``weights`` their
    frequencies (real-valued frequencies are allowed so an exact
    distribution can be fitted).  Bins are geometric starting at 1 with the
    given edge ratio; empty bins are excluded from the fit.
    """
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if values.size == 0 or (values < 1).any():
        raise ValueError("fit requires values >= 1")
    vmax = values.max()
    n_bins = 1
    while ratio ** n_bins <= vmax:
        n_bins += 1
    edges = ratio ** np.arange(n_bins + 1)
    counts = np.zeros(n_bins)
    which = np.searchsorted(edges, values, side="right") - 1
    np.add.at(counts, which, weights)
    lattice_lo = np.ceil(edges[:-1]).astype(np.int64)
    lattice_hi = np.ceil(edges[1:]).astype(np.int64)   # exclusive
    # the observed support ends at vmax: degrees beyond it are not zeros of
    # the histogram, so the last bin must not average over them
    lattice_hi = np.minimum(lattice_hi, int(vmax) + 1)
    n_lattice = np.maximum(lattice_hi - lattice_lo, 0)
    has_lattice = n_lattice > 0
    # cum[i] = sum of ln(m) for m = 1..i
    log_k = np.log(np.arange(1, lattice_hi[-1], dtype=np.float64))
    cum = np.concatenate([[0.0], np.cumsum(log_k)])
    centers = np.ones(n_bins)
    centers[has_lattice] = np.exp(
        (cum[lattice_hi[has_lattice] - 1] - cum[lattice_lo[has_lattice] - 1])
        / n_lattice[has_lattice])
    densities = np.zeros(n_bins)
    densities[has_lattice] = counts[has_lattice] / (n_lattice[has_lattice]
                                                    * n_total)
    filled = counts > 0
    if filled.sum() < 3:
        raise FitError("fewer than 3 non-empty bins")
    x = np.log10(centers[filled])
    y = np.log10(densities[filled])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    resid = y - fitted
    ss_res = float((resid ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    dof = x.size - 2
    if dof > 0:
        sxx = float(((x - x.mean()) ** 2).sum())
        stderr = float(np.sqrt(ss_res / dof / sxx))
    else:
        stderr = 0.0
    return LogBinnedFit(edges, centers, densities, float(slope), stderr, r2, ratio)


def degree_distribution_fit(g: Graph, ratio: float = 1.5) -> LogBinnedFit:
    """Fit the graph's degree distribution; degree-0 nodes are excluded from
    the histogram (log undefined) but still count in the normalisation."""
    deg = g.degrees
    deg = deg[deg >= 1]
    if np.unique(deg).size < 2:
        raise FitError("need at least 2 distinct degrees >= 1")
    values, counts = np.unique(deg, return_counts=True)
    return fit_log_binned(values, counts, n_total=g.N, ratio=ratio)
