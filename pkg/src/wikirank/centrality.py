"""Five centrality measures, the 0-100 rescaling and the average score.

Degree is computed on the full graph; closeness, betweenness, eigenvector
and pagerank on the largest connected component.  Arrays are full-length
with NaN for nodes outside a measure's scope.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, connected_components

MEASURES = ("degree", "betweenness", "closeness", "eigenvector", "pagerank")

DEFAULT_ALPHA = 0.85
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 1000


class PowerIterationError(RuntimeError):
    """Raised when a power iteration fails to converge."""

    def __init__(self, what: str, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"{what} did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )


def rescale(raw: np.ndarray) -> np.ndarray:
    """Linear map onto [0, 100]: 100 * value / max(value).

    NaN entries (nodes outside the measure's scope) stay NaN.  An all-zero
    input has no well-defined maximum; it is returned as all zeros with a
    warning.
    """
    raw = np.asarray(raw, dtype=np.float64)
    out = raw.copy()
    finite = ~np.isnan(raw)
    if not finite.any():
        return out
    peak = raw[finite].max()
    if peak <= 0.0:
        warnings.warn("rescale: all values are zero, returning zeros")
        return out
    # divide first: peak/peak is exactly 1.0, so the maximum is exactly 100
    out[finite] = (raw[finite] / peak) * 100.0
    return out


def degree_centrality(g: Graph) -> np.ndarray:
    """Raw degree of every node (full graph)."""
    return g.degrees.astype(np.float64)


def _lcc(g: Graph):
    parts = connected_components(g)
    members = parts.largest_members()
    sub, _ = g.subgraph(members)
    return sub, members


def closeness(g: Graph) -> np.ndarray:
    """Closeness over the largest component: (|C|-1) / sum of distances."""
    sub, members = _lcc(g)
    out = np.full(g.N, np.nan)
    if sub.N < 2:
        warnings.warn("closeness: largest component has fewer than 2 nodes")
        return out
    indptr, indices = sub.csr
    dist_sum, _ = _kernels.bfs_all_sources(indptr, indices)
    out[members] = (sub.N - 1) / dist_sum.astype(np.float64)
    return out


def betweenness(g: Graph) -> np.ndarray:
    """Betweenness over the largest component: for every unordered pair
    {s, t} with s != v != t, the fraction of shortest s-t paths through v."""
    sub, members = _lcc(g)
    out = np.full(g.N, np.nan)
    if sub.N == 0:
        return out
    if sub.N == 1:
        out[members] = 0.0
        return out
    indptr, indices = sub.csr
    bet, _, _ = _kernels.brandes_all(indptr, indices)
    out[members] = bet
    return out


def _adjacency_matvec(indptr: np.ndarray, indices: np.ndarray,
                      x: np.ndarray) -> np.ndarray:
    # valid only when every row is non-empty, which holds on any connected
    # graph with >= 2 nodes
    return np.add.reduceat(x[indices], indptr[:-1])


def eigenvector(g: Graph, tol: float = DEFAULT_TOL,
                max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """Leading-eigenvector centrality of the largest component's adjacency
    matrix, normalised to unit maximum.

    Power iteration runs on A + I: the shift leaves eigenvectors untouched
    but makes the leading eigenvalue strictly dominant on bipartite
    components, where plain iteration on A oscillates.  Convergence is the
    max-norm difference of successive normalised iterates.
    """
    sub, members = _lcc(g)
    if sub.N == 0:
        return np.full(g.N, np.nan)
    if sub.N == 1:
        out = np.full(g.N, np.nan)
        out[members] = 1.0
        return out
    return _sub_eigenvector(sub, members, g.N, tol, max_iter)


def pagerank(g: Graph, alpha: float = DEFAULT_ALPHA, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """Stationary distribution of the damped random walk on the largest
    component; the raw vector sums to 1 over the component.

    The update is the half-lazy walk x <- (x + G x) / 2 with
    G = alpha*T + (1-alpha)/N: the fixed point is identical to that of G
    but the iteration also converges on bipartite components when
    alpha = 1.  Convergence is the L1 difference of successive iterates.
    """
    sub, members = _lcc(g)
    if sub.N == 0:
        _check_alpha(alpha)
        return np.full(g.N, np.nan)
    if sub.N == 1:
        _check_alpha(alpha)
        out = np.full(g.N, np.nan)
        out[members] = 1.0
        return out
    return _sub_pagerank(sub, members, g.N, alpha, tol, max_iter)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")


@dataclass(frozen=True, eq=False)
class CentralityTable:
    """Per-node raw and rescaled scores for the five measures plus the
    average of the rescaled values (not itself rescaled)."""

    labels: tuple[str, ...]
    raw: dict[str, np.ndarray]
    rescaled: dict[str, np.ndarray]
    average: np.ndarray
    in_lcc: np.ndarray
    alpha: float
    scopes: dict[str, str]

    @property
    def n(self) -> int:
        return len(self.labels)

    def rank_by_average(self) -> np.ndarray:
        """Ordinal rank by average score (1 = best), ties broken by label;
        nodes without an average get rank 0."""
        from .ranking import ordinal_ranks

        return ordinal_ranks(self.average, self.labels)

    def top_k_indices(self, k: int) -> np.ndarray:
        ranks = self.rank_by_average()
        scored = np.flatnonzero(ranks > 0)
        order = scored[np.argsort(ranks[scored])]
        return order[:k]


def average_score(rescaled: dict[str, np.ndarray]) -> np.ndarray:
    """Arithmetic mean of the five rescaled measures; NaN unless a node has
    all five (i.e. lies in the largest component)."""
    stack = np.vstack([rescaled[m] for m in MEASURES])
    return stack.mean(axis=0)


@dataclass(frozen=True, eq=False)
class FullAnalysis:
    """A centrality table plus the path statistics that fall out of the
    same shortest-path sweep."""

    table: CentralityTable
    diameter: int
    avg_path_length: float
    lcc_nodes: int
    lcc_edges: int


def full_analysis(g: Graph, alpha: float = DEFAULT_ALPHA,
                  eig_tol: float = DEFAULT_TOL, pr_tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> FullAnalysis:
    """Compute all five measures in one pass over the largest component."""
    if g.N == 0:
        raise ValueError("cannot analyze an empty graph")
    sub, members = _lcc(g)
    n = g.N

    raw: dict[str, np.ndarray] = {m: np.full(n, np.nan) for m in MEASURES}
    raw["degree"] = degree_centrality(g)

    diameter = 0
    apl = 0.0
    if sub.N >= 2:
        indptr, indices = sub.csr
        bet, dist_sum, ecc = _kernels.brandes_all(indptr, indices)
        raw["betweenness"][members] = bet
        raw["closeness"][members] = (sub.N - 1) / dist_sum.astype(np.float64)
        diameter = int(ecc.max())
        apl = float(dist_sum.sum()) / (sub.N * (sub.N - 1))
        raw["eigenvector"] = _sub_eigenvector(sub, members, n, eig_tol, max_iter)
        raw["pagerank"] = _sub_pagerank(sub, members, n, alpha, pr_tol, max_iter)
    elif sub.N == 1:
        raw["betweenness"][members] = 0.0
        raw["eigenvector"][members] = 1.0
        raw["pagerank"][members] = 1.0

    rescaled = {m: rescale(raw[m]) for m in MEASURES}
    avg = average_score(rescaled)
    in_lcc = np.zeros(n, dtype=bool)
    in_lcc[members] = True
    scopes = {m: "largest_component" for m in MEASURES}
    scopes["degree"] = "full_graph"
    table = CentralityTable(g.labels, raw, rescaled, avg, in_lcc, alpha, scopes)
    return FullAnalysis(table, diameter, apl, sub.N, sub.E)


def _sub_eigenvector(sub, members, n, tol, max_iter):
    indptr, indices = sub.csr
    x = np.full(sub.N, 1.0 / sub.N)
    diff = np.inf
    for _ in range(max_iter):
        nxt = x + _adjacency_matvec(indptr, indices, x)
        nxt /= nxt.max()
        diff = np.abs(nxt - x).max()
        x = nxt
        if diff < tol:
            out = np.full(n, np.nan)
            out[members] = x
            return out
    raise PowerIterationError("eigenvector power iteration", max_iter, diff)


def _sub_pagerank(sub, members, n, alpha, tol, max_iter):
    _check_alpha(alpha)
    indptr, indices = sub.csr
    inv_deg = 1.0 / sub.degrees
    x = np.full(sub.N, 1.0 / sub.N)
    teleport = (1.0 - alpha) / sub.N
    diff = np.inf
    for _ in range(max_iter):
        walked = _adjacency_matvec(indptr, indices, x * inv_deg)
        nxt = 0.5 * (x + alpha * walked + teleport)
        diff = np.abs(nxt - x).sum()
        x = nxt
        if diff < tol:
            x /= x.sum()
            out = np.full(n, np.nan)
            out[members] = x
            return out
    raise PowerIterationError("pagerank power iteration", max_iter, diff)


def compute_table(g: Graph, alpha: float = DEFAULT_ALPHA,
                  eig_tol: float = DEFAULT_TOL, pr_tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> CentralityTable:
    return full_analysis(g, alpha, eig_tol, pr_tol, max_iter).table
