import csv
from pathlib import Path

import numpy as np
import pytest

from wikirank import _kernels
from wikirank.centrality import MEASURES, CentralityTable
from wikirank.graph import Graph, canonical_graph, from_edge_list

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    # one-time JIT so individual tests measure algorithm time, not compile time
    _kernels.warmup()


def graph_from_pairs(n, pairs):
    labels = tuple(f"n{i:03d}" for i in range(n))
    if pairs:
        arr = np.array([(min(a, b), max(a, b)) for a, b in pairs], dtype=np.int64)
        return canonical_graph(labels, arr[:, 0], arr[:, 1])
    empty = np.empty(0, dtype=np.int64)
    return canonical_graph(labels, empty, empty.copy())


def random_graph(rng, n_max=7, p_edge=0.4):
    n = int(rng.integers(2, n_max + 1))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p_edge]
    return graph_from_pairs(n, pairs)


def random_connected_graph(rng, n_max=40):
    n = int(rng.integers(3, n_max + 1))
    pairs = {(i, int(rng.integers(0, i))) for i in range(1, n)}
    extra = int(rng.integers(0, 2 * n))
    for _ in range(extra):
        a = int(rng.integers(0, n))
        b = int(rng.integers(0, n))
        if a != b:
            pairs.add((max(a, b), min(a, b)))
    return graph_from_pairs(n, pairs)


def preferential_graph(n, rng, extra_per_node=(2, 2, 1)):
    """Deterministic fat-tailed test graph grown by preferential attachment."""
    stubs = [0]
    pairs = set()
    for i in range(1, n):
        m = min(extra_per_node[i % len(extra_per_node)], i)
        chosen = set()
        while len(chosen) < m:
            chosen.add(stubs[int(rng.integers(len(stubs)))])
        for t in chosen:
            pairs.add((t, i))
            stubs.append(t)
            stubs.append(i)
    return graph_from_pairs(n, pairs)


def path_graph(n=3):
    return graph_from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return graph_from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves=3):
    return graph_from_pairs(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n):
    return graph_from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def adjacency_of(g: Graph):
    adj = {i: set() for i in range(g.N)}
    for a, b in zip(g.edges_u, g.edges_v):
        adj[int(a)].add(int(b))
        adj[int(b)].add(int(a))
    return adj


def load_score_fixture(name) -> CentralityTable:
    """A centrality table built from a published score-table CSV (rescaled
    marks only; raw values are not published, so raw == rescaled here)."""
    rows = list(csv.DictReader(open(DATA_DIR / name, encoding="utf-8")))
    labels = tuple(r["name"] for r in rows)
    n = len(rows)
    rescaled = {m: np.array([float(r[m]) for r in rows]) for m in MEASURES}
    average = np.array([float(r["average"]) for r in rows])
    raw = {m: rescaled[m].copy() for m in MEASURES}
    return CentralityTable(labels, raw, rescaled, average,
                           np.ones(n, dtype=bool), 0.85,
                           {m: "largest_component" for m in MEASURES})
