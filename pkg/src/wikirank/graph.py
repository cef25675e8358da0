"""Immutable undirected simple graph with components, BFS and global statistics."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class IngestCounts:
    """What was dropped while building a graph from raw edge records."""

    self_loops_dropped: int = 0
    duplicates_dropped: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph over labelled nodes.

    Node identity is the label (a page title); internally nodes are dense
    integer indices in first-appearance order.  Edge arrays are canonical:
    u < v, sorted by (u, v).  Instances are immutable and safe to share
    across threads and processes.
    """

    labels: tuple[str, ...]
    edges_u: np.ndarray
    edges_v: np.ndarray
    ingest: IngestCounts = field(default=IngestCounts())

    @property
    def N(self) -> int:
        return len(self.labels)

    @property
    def E(self) -> int:
        return int(self.edges_u.size)

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.N, dtype=np.int64)
        if self.E:
            np.add.at(deg, self.edges_u, 1)
            np.add.at(deg, self.edges_v, 1)
        return deg

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form: (indptr, indices), neighbour lists sorted."""
        n = self.N
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.degrees)
        src = np.concatenate([self.edges_u, self.edges_v])
        dst = np.concatenate([self.edges_v, self.edges_u])
        order = np.lexsort((dst, src))
        indices = dst[order].astype(np.int32)
        return indptr, indices

    def neighbors(self, i: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[i]:indptr[i + 1]]

    def has_node(self, label: str) -> bool:
        return label in self.label_index

    def edge_labels(self) -> Iterable[tuple[str, str]]:
        for a, b in zip(self.edges_u, self.edges_v):
            yield self.labels[a], self.labels[b]

    def subgraph(self, nodes: np.ndarray) -> tuple["Graph", np.ndarray]:
        """Induced subgraph on the given node indices.

        Returns the subgraph (nodes renumbered in the given order) and the
        array of original indices, so results can be mapped back.
        """
        nodes = np.asarray(nodes, dtype=np.int64)
        remap = np.full(self.N, -1, dtype=np.int64)
        remap[nodes] = np.arange(nodes.size)
        keep = (remap[self.edges_u] >= 0) & (remap[self.edges_v] >= 0)
        u = remap[self.edges_u[keep]]
        v = remap[self.edges_v[keep]]
        labels = tuple(self.labels[i] for i in nodes)
        return canonical_graph(labels, u.astype(np.int64), v.astype(np.int64)), nodes

    def with_edges(self, edges_u: np.ndarray, edges_v: np.ndarray) -> "Graph":
        """Same node set, different edge set (used by the rewiring model)."""
        return canonical_graph(self.labels, np.asarray(edges_u, dtype=np.int64),
                          np.asarray(edges_v, dtype=np.int64))


def canonical_graph(labels: tuple[str, ...], u: np.ndarray, v: np.ndarray,
               ingest: IngestCounts = IngestCounts()) -> Graph:
    """Canonicalise edge arrays: u < v, sorted, unique."""
    if u.size == 0:
        empty = np.empty(0, dtype=np.int64)
        return Graph(labels, empty, empty.copy(), ingest)
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    order = np.lexsort((hi, lo))
    lo, hi = lo[order], hi[order]
    keep = np.ones(lo.size, dtype=bool)
    keep[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    return Graph(labels, lo[keep], hi[keep], ingest)


def from_edge_list(records: Iterable[tuple[str, str]]) -> Graph:
    """Build a graph from (label, label) records.

    Self-loop records are dropped and duplicate pairs collapsed; both are
    counted in the returned graph's ``ingest`` report.  Node order is
    first-appearance order over the records.
    """
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    seen: set[tuple[int, int]] = set()
    self_loops = 0
    duplicates = 0
    for a, b in records:
        if not a or not b:
            raise ValueError("edge labels must be non-empty strings")
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        if ia == ib:
            self_loops += 1
            continue
        key = (ia, ib) if ia < ib else (ib, ia)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        us.append(key[0])
        vs.append(key[1])
    labels = tuple(index)
    return canonical_graph(labels, np.asarray(us, dtype=np.int64),
                      np.asarray(vs, dtype=np.int64),
                      IngestCounts(self_loops, duplicates))


def read_edge_list(path) -> Graph:
    """Read the on-disk edge-list format: one tab-separated pair per line,
    '#' lines are comments."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two tab-separated titles")
            records.append((parts[0], parts[1]))
    return from_edge_list(records)


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in g.edge_labels():
            fh.write(f"{a}\t{b}\n")


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components; ids ordered by (size desc, smallest member)."""

    component_id: np.ndarray       # per node
    sizes: np.ndarray              # per component, descending
    members: tuple[np.ndarray, ...]  # per component, ascending node index

    @property
    def largest_id(self) -> int:
        return 0 if self.sizes.size else -1

    def largest_members(self) -> np.ndarray:
        if not self.sizes.size:
            return np.empty(0, dtype=np.int64)
        return self.members[0]


def connected_components(g: Graph) -> ComponentPartition:
    """BFS partition into connected components.

    Component ids are deterministic: components are ordered by size
    descending, ties broken by their smallest node index.
    """
    n = g.N
    if n == 0:
        return ComponentPartition(np.empty(0, dtype=np.int64),
                                  np.empty(0, dtype=np.int64), ())
    indptr, indices = g.csr
    raw = _kernels.component_labels(indptr, indices)
    n_comp = int(raw.max()) + 1
    raw_sizes = np.bincount(raw, minlength=n_comp)
    # discovery order == smallest-member order, so a stable sort on -size
    # orders ids by (size desc, smallest member asc)
    order = np.argsort(-raw_sizes, kind="stable")
    new_id = np.empty(n_comp, dtype=np.int64)
    new_id[order] = np.arange(n_comp)
    comp = new_id[raw]
    by_comp = np.argsort(comp, kind="stable")
    sizes = raw_sizes[order]
    bounds = np.zeros(n_comp + 1, dtype=np.int64)
    bounds[1:] = np.cumsum(sizes)
    members = tuple(np.sort(by_comp[bounds[c]:bounds[c + 1]])
                    for c in range(n_comp))
    return ComponentPartition(comp, sizes, members)


@dataclass(frozen=True)
class ShortestPathData:
    """BFS result from one source: hop distances, shortest-path counts and
    the predecessor DAG (d=-1 marks unreachable nodes)."""

    source: int
    d: np.ndarray
    sigma: np.ndarray
    predecessors: tuple[tuple[int, ...], ...]


def single_source_shortest_paths(g: Graph, s: int) -> ShortestPathData:
    """Unweighted BFS with path counting from node index ``s``."""
    if not 0 <= s < g.N:
        raise KeyError(f"unknown node id {s}")
    n = g.N
    indptr, indices = g.csr
    d = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    preds: list[list[int]] = [[] for _ in range(n)]
    d[s] = 0
    sigma[s] = 1.0
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in indices[indptr[v]:indptr[v + 1]]:
            w = int(w)
            if d[w] < 0:
                d[w] = d[v] + 1
                queue.append(w)
            if d[w] == d[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return ShortestPathData(s, d, sigma, tuple(tuple(p) for p in preds))


@dataclass(frozen=True)
class NetworkParameters:
    """Global statistics in the shape of the summary table: diameter and
    average path length are over the largest component, clustering is the
    mean local coefficient over all nodes (0 for degree < 2)."""

    n_nodes: int
    n_edges: int
    avg_degree: float
    lcc_nodes: int
    lcc_edges: int
    lcc_avg_degree: float
    diameter: int
    avg_path_length: float
    clustering: float

    def as_dict(self) -> dict:
        return {
            "nodes": self.n_nodes,
            "edges": self.n_edges,
            "avg_degree": self.avg_degree,
            "lcc_nodes": self.lcc_nodes,
            "lcc_edges": self.lcc_edges,
            "lcc_avg_degree": self.lcc_avg_degree,
            "diameter": self.diameter,
            "avg_path_length": self.avg_path_length,
            "clustering": self.clustering,
        }


def clustering_coefficient(g: Graph) -> float:
    """Mean local clustering coefficient over all nodes.

    Local coefficient of v is triangles(v) / (k(k-1)/2); nodes with
    degree < 2 contribute 0.
    """
    if g.N == 0:
        return 0.0
    indptr, indices = g.csr
    tri = _kernels.triangle_counts(indptr, indices)
    deg = g.degrees
    local = np.zeros(g.N, dtype=np.float64)
    mask = deg >= 2
    pairs = deg[mask] * (deg[mask] - 1) / 2.0
    local[mask] = tri[mask] / pairs
    return float(local.mean())


def network_parameters(g: Graph) -> NetworkParameters:
    """Node/edge counts, degree means, LCC diameter and average path length,
    and the mean local clustering coefficient."""
    if g.N == 0:
        return NetworkParameters(0, 0, 0.0, 0, 0, 0.0, 0, 0.0, 0.0)
    parts = connected_components(g)
    lcc_nodes = parts.largest_members()
    sub, _ = g.subgraph(lcc_nodes)
    if sub.N >= 2:
        indptr, indices = sub.csr
        dist_sum, ecc = _kernels.bfs_all_sources(indptr, indices)
        diameter = int(ecc.max())
        # each unordered pair counted twice in the per-source sums
        apl = float(dist_sum.sum()) / (sub.N * (sub.N - 1))
    else:
        diameter = 0
        apl = 0.0
    return NetworkParameters(
        n_nodes=g.N,
        n_edges=g.E,
        avg_degree=2.0 * g.E / g.N,
        lcc_nodes=sub.N,
        lcc_edges=sub.E,
        lcc_avg_degree=(2.0 * sub.E / sub.N) if sub.N else 0.0,
        diameter=diameter,
        avg_path_length=apl,
        clustering=clustering_coefficient(g),
    )
