"""Preferential edge-rewiring noise model and Monte Carlo ensembles.

A sample removes a fixed fraction of edges uniformly at random and adds the
same number of candidate edges whose endpoints are drawn in proportion to
the original degrees; candidate self-loops and duplicates are discarded
(not resampled), so a sample can lose a few edges.  Per-sample randomness
is a splittable function of (master_seed, sample index), which makes
ensembles reproducible bit-for-bit for any worker count.
"""

from __future__ import annotations

import multiprocessing
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .centrality import (DEFAULT_ALPHA, DEFAULT_MAX_ITER, DEFAULT_TOL,
                         MEASURES, full_analysis)
from .graph import Graph, clustering_coefficient
from .ranking import _ordinal_ranks_from_pos, label_positions

ENSEMBLE_MEASURES = MEASURES + ("average",)

SAMPLE_PARAM_FIELDS = ("edges", "lcc_nodes", "lcc_edges", "diameter",
                       "avg_path_length", "clustering")


@dataclass(frozen=True)
class NoiseConfig:
    """Rewiring fraction, sample count and the master seed."""

    p: float = 0.1
    samples: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")


def sample_rng(master_seed: int, index: int) -> np.random.Generator:
    """The RNG for one sample; depends only on (master_seed, index)."""
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(index,)))


def rewire(g: Graph, p: float, rng: np.random.Generator) -> Graph:
    """One noisy copy of the graph: round(p*E) edges removed uniformly
    without replacement, the same number of degree-weighted candidates
    added, self-loops and duplicates discarded."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if g.E < 1:
        raise ValueError("rewire requires a graph with at least one edge")
    n_rewire = int(round(p * g.E))
    if n_rewire == 0:
        return g
    keep = np.ones(g.E, dtype=bool)
    keep[rng.choice(g.E, size=n_rewire, replace=False)] = False
    # endpoints drawn independently with probability k_orig / 2E via the
    # cumulative degree table (a uniform stub index)
    stubs = np.cumsum(g.degrees)
    picks = rng.integers(0, 2 * g.E, size=(2, n_rewire))
    cand_a = np.searchsorted(stubs, picks[0], side="right")
    cand_b = np.searchsorted(stubs, picks[1], side="right")
    not_loop = cand_a != cand_b
    lo = np.minimum(cand_a, cand_b)[not_loop]
    hi = np.maximum(cand_a, cand_b)[not_loop]
    n = np.int64(g.N)
    kept_keys = g.edges_u[keep] * n + g.edges_v[keep]
    cand_keys = lo * n + hi
    keys = np.unique(np.concatenate([kept_keys, cand_keys]))
    return g.with_edges(keys // n, keys % n)


@dataclass(frozen=True, eq=False)
class DegreeTheory:
    """Closed-form mean and standard deviation of a node's degree after one
    rewiring pass: the mean is the original degree, the variance is
    p*k*(2 - p - k/(2E))."""

    k_orig: np.ndarray
    expected: np.ndarray
    sigma: np.ndarray


def degree_theory(k, p: float, E: int) -> DegreeTheory:
    if E < 1:
        raise ValueError("E must be >= 1")
    k = np.asarray(k, dtype=np.float64)
    if (k < 0).any():
        raise ValueError("degrees must be non-negative")
    var = p * k * (2.0 - p - k / (2.0 * E))
    return DegreeTheory(k, k.copy(), np.sqrt(var))


@dataclass(frozen=True, eq=False)
class BoxStats:
    """Quartiles with 1.5*IQR whiskers; quartiles use linear interpolation
    at positions q*(n-1) on the sorted sample."""

    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: np.ndarray


def box_stats(values) -> BoxStats:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("box_stats requires at least one value")
    q1, median, q3 = np.quantile(arr, [0.25, 0.5, 0.75])
    iqr = q3 - q1
    lo = q1 - 1.5 * iqr
    hi = q3 + 1.5 * iqr
    outliers = np.sort(arr[(arr < lo) | (arr > hi)])
    return BoxStats(float(q1), float(median), float(q3), float(lo), float(hi),
                    outliers)


@dataclass(frozen=True, eq=False)
class NoiseEnsembleStats:
    """Per-node score and rank statistics over the Monte Carlo samples,
    plus per-sample network parameters.

    Scores are rescaled within each run before aggregation; rank arrays use
    NaN where a node had no value in a sample.  ``rank_samples`` keeps the
    full (samples, measures, nodes) rank tensor for box plots.
    """

    labels: tuple[str, ...]
    config: NoiseConfig
    base_degrees: np.ndarray
    score_mean: dict[str, np.ndarray]
    score_std: dict[str, np.ndarray]
    rank_mean: dict[str, np.ndarray]
    rank_std: dict[str, np.ndarray]
    rank_box: dict[str, dict[str, np.ndarray]]
    degree_raw_mean: np.ndarray
    degree_raw_std: np.ndarray
    rank_samples: np.ndarray
    sample_params: np.ndarray       # (samples, 6), NaN rows for failures
    failed: tuple[int, ...]

    @property
    def n_valid(self) -> int:
        return self.config.samples - len(self.failed)

    def rank_box_stats(self, measure: str, node: int) -> BoxStats:
        """Full box statistics (with outlier values) of one node's rank."""
        m = ENSEMBLE_MEASURES.index(measure)
        ranks = self.rank_samples[:, m, node]
        return box_stats(ranks[~np.isnan(ranks)])


@dataclass(frozen=True, eq=False)
class RegressionResult:
    slope: float
    r2: float
    n_points: int


def degree_std_regression(ensemble: NoiseEnsembleStats) -> RegressionResult:
    """Least-squares fit through the origin of the empirical degree standard
    deviation against sqrt(original degree)."""
    k = ensemble.base_degrees.astype(np.float64)
    if np.unique(k).size < 2:
        raise ValueError("regression needs at least 2 distinct degrees")
    x = np.sqrt(k)
    y = ensemble.degree_raw_std
    sxx = float((x * x).sum())
    slope = float((x * y).sum() / sxx) if sxx > 0 else 0.0
    resid = y - slope * x
    ss_res = float((resid ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RegressionResult(slope, r2, int(x.size))


# ---------------------------------------------------------------------------
# ensemble execution

_WORKER: dict = {}


def _sample_payload(g: Graph, label_pos: np.ndarray, index: int,
                    cfg: NoiseConfig, opts: dict):
    """Everything recorded about one Monte Carlo sample."""
    rng = sample_rng(cfg.master_seed, index)
    noisy = rewire(g, cfg.p, rng)
    n = g.N
    n_meas = len(ENSEMBLE_MEASURES)
    degree = noisy.degrees.astype(np.int32)
    try:
        analysis = full_analysis(noisy, **opts)
    except ValueError:
        return index, False, None, None, degree, None
    if analysis.lcc_nodes < 2:
        return index, False, None, None, degree, None
    table = analysis.table
    scores = np.empty((n_meas, n), dtype=np.float32)
    ranks = np.empty((n_meas, n), dtype=np.float32)
    for m, name in enumerate(MEASURES):
        scores[m] = table.rescaled[name]
        ranks[m] = _ordinal_ranks_from_pos(table.rescaled[name], label_pos)
    scores[-1] = table.average
    ranks[-1] = _ordinal_ranks_from_pos(table.average, label_pos)
    params = np.array([
        noisy.E,
        analysis.lcc_nodes,
        analysis.lcc_edges,
        analysis.diameter,
        analysis.avg_path_length,
        clustering_coefficient(noisy),
    ], dtype=np.float64)
    return index, True, scores, ranks, degree, params


def _init_worker(labels, edges_u, edges_v, label_pos, cfg, opts):
    _WORKER["graph"] = Graph(labels, edges_u, edges_v)
    _WORKER["label_pos"] = label_pos
    _WORKER["cfg"] = cfg
    _WORKER["opts"] = opts


def _run_worker(index: int):
    return _sample_payload(_WORKER["graph"], _WORKER["label_pos"], index,
                           _WORKER["cfg"], _WORKER["opts"])


def run_ensemble(g: Graph, cfg: NoiseConfig, workers: int = 1,
                 alpha: float = DEFAULT_ALPHA, eig_tol: float = DEFAULT_TOL,
                 pr_tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER) -> NoiseEnsembleStats:
    """Run the Monte Carlo ensemble and aggregate per-node statistics.

    The result is a pure function of the graph, the config and the solver
    options: samples are seeded individually and aggregated in sample
    order, so the worker count cannot change any output bit.
    """
    opts = {"alpha": alpha, "eig_tol": eig_tol, "pr_tol": pr_tol,
            "max_iter": max_iter}
    label_pos = label_positions(g.labels)
    s = cfg.samples
    n = g.N
    n_meas = len(ENSEMBLE_MEASURES)

    if workers <= 1:
        payloads = (_sample_payload(g, label_pos, i, cfg, opts)
                    for i in range(s))
        results = list(payloads)
    else:
        ctx = multiprocessing.get_context("spawn")
        chunk = max(1, s // (workers * 8))
        with ProcessPoolExecutor(
                max_workers=workers, mp_context=ctx,
                initializer=_init_worker,
                initargs=(g.labels, g.edges_u, g.edges_v, label_pos, cfg, opts),
        ) as pool:
            results = list(pool.map(_run_worker, range(s), chunksize=chunk))

    score_stack = np.full((s, n_meas, n), np.nan, dtype=np.float32)
    rank_stack = np.full((s, n_meas, n), np.nan, dtype=np.float32)
    degree_stack = np.zeros((s, n), dtype=np.int32)
    sample_params = np.full((s, len(SAMPLE_PARAM_FIELDS)), np.nan)
    failed = []
    for index, ok, scores, ranks, degree, params in results:
        degree_stack[index] = degree
        if not ok:
            failed.append(index)
            continue
        score_stack[index] = scores
        rank_stack[index] = ranks
        sample_params[index] = params

    valid = np.ones(s, dtype=bool)
    valid[failed] = False
    score_stack = score_stack[valid]
    rank_stack = rank_stack[valid]
    degree_stack = degree_stack[valid]

    score_mean, score_std, rank_mean, rank_std, rank_box = {}, {}, {}, {}, {}
    with np.errstate(invalid="ignore"), warnings.catch_warnings():
        # all-NaN node columns (nodes never inside a sample's LCC) are fine
        warnings.simplefilter("ignore", RuntimeWarning)
        for m, name in enumerate(ENSEMBLE_MEASURES):
            score_mean[name] = np.nanmean(score_stack[:, m, :], axis=0,
                                          dtype=np.float64)
            score_std[name] = np.nanstd(score_stack[:, m, :], axis=0,
                                        dtype=np.float64, ddof=1)
            rank_mean[name] = np.nanmean(rank_stack[:, m, :], axis=0,
                                         dtype=np.float64)
            rank_std[name] = np.nanstd(rank_stack[:, m, :], axis=0,
                                       dtype=np.float64, ddof=1)
            rank_box[name] = _box_arrays(rank_stack[:, m, :])

    return NoiseEnsembleStats(
        labels=g.labels,
        config=cfg,
        base_degrees=g.degrees.copy(),
        score_mean=score_mean,
        score_std=score_std,
        rank_mean=rank_mean,
        rank_std=rank_std,
        rank_box=rank_box,
        degree_raw_mean=degree_stack.mean(axis=0, dtype=np.float64),
        degree_raw_std=degree_stack.std(axis=0, dtype=np.float64,
                                        ddof=1 if degree_stack.shape[0] > 1 else 0),
        rank_samples=rank_stack,
        sample_params=sample_params,
        failed=tuple(failed),
    )


def _box_arrays(ranks: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorised per-node box statistics of the rank samples."""
    q1, median, q3 = np.nanquantile(ranks, [0.25, 0.5, 0.75], axis=0)
    iqr = q3 - q1
    lo = q1 - 1.5 * iqr
    hi = q3 + 1.5 * iqr
    below = np.less(ranks, lo[None, :], where=~np.isnan(ranks),
                    out=np.zeros_like(ranks, dtype=bool))
    above = np.greater(ranks, hi[None, :], where=~np.isnan(ranks),
                       out=np.zeros_like(ranks, dtype=bool))
    return {
        "q1": q1,
        "median": median,
        "q3": q3,
        "whisker_low": lo,
        "whisker_high": hi,
        "n_outliers": (below | above).sum(axis=0).astype(np.int64),
    }
