"""Compiled graph kernels (BFS, Brandes accumulation, triangles).

All kernels take adjacency in CSR form (int64 indptr, int32 indices with
sorted neighbour lists) and are deterministic: per-source work is assigned
to a fixed number of stripes whose partial results are combined in stripe
order, so results are bit-identical regardless of the thread count.
"""

from __future__ import annotations

import numpy as np
from numba import config as _nb_config
from numba import njit, prange

_nb_config.THREADING_LAYER = "workqueue"

# fixed stripe count: determinism requires this to be independent of the
# number of threads actually used
_N_STRIPES = 64


@njit(cache=True)
def _bfs_from(indptr, indices, s, dist, sigma, order):
    """BFS from s, filling dist/sigma and the visit order; returns the number
    of visited nodes."""
    dist[s] = 0
    sigma[s] = 1.0
    order[0] = s
    head = 0
    tail = 1
    while head < tail:
        v = order[head]
        head += 1
        dv = dist[v]
        sv = sigma[v]
        for j in range(indptr[v], indptr[v + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = dv + 1
                order[tail] = w
                tail += 1
            if dist[w] == dv + 1:
                sigma[w] += sv
    return tail


@njit(cache=True, parallel=True)
def brandes_all(indptr, indices):
    """Betweenness (unordered pairs, endpoints excluded), per-source distance
    sums and eccentricities, from one BFS + dependency sweep per source."""
    n = indptr.size - 1
    bet_parts = np.zeros((_N_STRIPES, n), dtype=np.float64)
    dist_sum = np.zeros(n, dtype=np.int64)
    ecc = np.zeros(n, dtype=np.int64)
    for c in prange(_N_STRIPES):
        dist = np.full(n, -1, dtype=np.int32)
        sigma = np.zeros(n, dtype=np.float64)
        delta = np.zeros(n, dtype=np.float64)
        order = np.empty(n, dtype=np.int32)
        for s in range(c, n, _N_STRIPES):
            tail = _bfs_from(indptr, indices, s, dist, sigma, order)
            total = 0
            for i in range(tail):
                total += dist[order[i]]
            dist_sum[s] = total
            ecc[s] = dist[order[tail - 1]]
            for i in range(tail - 1, 0, -1):
                w = order[i]
                coeff = (1.0 + delta[w]) / sigma[w]
                dw = dist[w]
                for j in range(indptr[w], indptr[w + 1]):
                    v = indices[j]
                    if dist[v] == dw - 1:
                        delta[v] += sigma[v] * coeff
                bet_parts[c, w] += delta[w]
            # reset only what this source touched
            for i in range(tail):
                v = order[i]
                dist[v] = -1
                sigma[v] = 0.0
                delta[v] = 0.0
    bet = np.zeros(n, dtype=np.float64)
    for c in range(_N_STRIPES):
        for i in range(n):
            bet[i] += bet_parts[c, i]
    # every unordered {s,t} pair was accumulated from both endpoints
    return bet * 0.5, dist_sum, ecc


@njit(cache=True, parallel=True)
def bfs_all_sources(indptr, indices):
    """Per-source distance sums and eccentricities (reachable nodes only)."""
    n = indptr.size - 1
    dist_sum = np.zeros(n, dtype=np.int64)
    ecc = np.zeros(n, dtype=np.int64)
    for c in prange(_N_STRIPES):
        dist = np.full(n, -1, dtype=np.int32)
        sigma = np.zeros(n, dtype=np.float64)
        order = np.empty(n, dtype=np.int32)
        for s in range(c, n, _N_STRIPES):
            tail = _bfs_from(indptr, indices, s, dist, sigma, order)
            total = 0
            for i in range(tail):
                total += dist[order[i]]
            dist_sum[s] = total
            ecc[s] = dist[order[tail - 1]]
            for i in range(tail):
                v = order[i]
                dist[v] = -1
                sigma[v] = 0.0
    return dist_sum, ecc


@njit(cache=True)
def component_labels(indptr, indices):
    """Connected-component label per node, labels in discovery order (BFS
    from the smallest unvisited index)."""
    n = indptr.size - 1
    comp = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int32)
    cid = 0
    for start in range(n):
        if comp[start] >= 0:
            continue
        comp[start] = cid
        queue[0] = start
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if comp[w] < 0:
                    comp[w] = cid
                    queue[tail] = w
                    tail += 1
        cid += 1
    return comp


@njit(cache=True)
def triangle_counts(indptr, indices):
    """Triangles through each node; neighbour lists must be sorted."""
    n = indptr.size - 1
    tri = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if v <= u:
                continue
            # |N(u) ∩ N(v)| by merge; each common neighbour w closes a
            # triangle {u, v, w}
            a = indptr[u]
            b = indptr[v]
            ae = indptr[u + 1]
            be = indptr[v + 1]
            while a < ae and b < be:
                x = indices[a]
                y = indices[b]
                if x == y:
                    tri[x] += 1
                    tri[u] += 1
                    tri[v] += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
    # a triangle is found once from each of its three edges, so every member
    # node was incremented three times
    return tri // 3


def warmup() -> None:
    """Force-compile all kernels on a tiny graph (JIT cache primer)."""
    indptr = np.array([0, 2, 4, 6], dtype=np.int64)
    indices = np.array([1, 2, 0, 2, 0, 1], dtype=np.int32)
    brandes_all(indptr, indices)
    bfs_all_sources(indptr, indices)
    component_labels(indptr, indices)
    triangle_counts(indptr, indices)
