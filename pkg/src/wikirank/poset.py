"""Multi-measure dominance poset, its heights and the Hasse diagram.

A member dominates another when every one of its five rescaled measures is
strictly greater; any tie makes the pair incomparable.  The relation is a
strict partial order by construction, which an explicit transitivity audit
re-checks on every build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centrality import MEASURES, CentralityTable


@dataclass(frozen=True, eq=False)
class DominancePoset:
    """Strict dominance order over the top-k nodes by average score.

    ``relation[a, b]`` is True when member a beats member b on all five
    measures; members are ordered by average score (best first).
    """

    labels: tuple[str, ...]
    ratings: np.ndarray      # (k, 5) rescaled measures, column order MEASURES
    average: np.ndarray
    relation: np.ndarray     # (k, k) bool

    @property
    def size(self) -> int:
        return len(self.labels)

    def dominates(self, a: str, b: str) -> bool:
        return bool(self.relation[self.labels.index(a), self.labels.index(b)])


def build_poset(table: CentralityTable, k: int = 35) -> DominancePoset:
    """Pairwise strict-dominance relation over the top-k by average score."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    members = table.top_k_indices(k)
    if members.size < k:
        raise ValueError(
            f"table has only {members.size} fully scored nodes, need {k}")
    labels = tuple(table.labels[i] for i in members)
    ratings = np.column_stack([table.rescaled[m][members] for m in MEASURES])
    average = table.average[members]
    relation = dominance_relation(ratings)
    _audit_transitivity(relation)
    return DominancePoset(labels, ratings, average, relation)


def dominance_relation(ratings: np.ndarray) -> np.ndarray:
    """relation[a, b] iff every rating of a is strictly greater than b's."""
    ratings = np.asarray(ratings, dtype=np.float64)
    rel = (ratings[:, None, :] > ratings[None, :, :]).all(axis=2)
    np.fill_diagonal(rel, False)
    return rel


def _audit_transitivity(rel: np.ndarray) -> None:
    two_step = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    if (two_step & ~rel).any():
        raise AssertionError("dominance relation failed the transitivity audit")
    if (rel & rel.T).any():
        raise AssertionError("dominance relation failed the antisymmetry audit")


def top_nodes(poset: DominancePoset) -> set[str]:
    """Maximal elements: nobody dominates them."""
    if poset.size == 0:
        raise ValueError("empty poset")
    dominated = poset.relation.any(axis=0)
    return {poset.labels[i] for i in np.flatnonzero(~dominated)}


def heights(poset: DominancePoset) -> dict[str, int]:
    """Longest-chain height of each member: tops have height 0 and every
    chain is counted from a maximal element downwards."""
    rel = poset.relation
    k = poset.size
    in_deg = rel.sum(axis=0)
    h = np.zeros(k, dtype=np.int64)
    # Kahn's ordering over the dominance DAG
    ready = [i for i in range(k) if in_deg[i] == 0]
    remaining = in_deg.copy()
    seen = 0
    while ready:
        nxt: list[int] = []
        for v in ready:
            seen += 1
            for w in np.flatnonzero(rel[v]):
                if h[v] + 1 > h[w]:
                    h[w] = h[v] + 1
                remaining[w] -= 1
                if remaining[w] == 0:
                    nxt.append(int(w))
        ready = nxt
    if seen != k:
        raise AssertionError("dominance relation contains a cycle")
    return {poset.labels[i]: int(h[i]) for i in range(k)}


@dataclass(frozen=True, eq=False)
class HasseDag:
    """Covering relation of the poset plus the per-node display data."""

    labels: tuple[str, ...]
    heights: np.ndarray
    average: np.ndarray
    is_top: np.ndarray
    edges: tuple[tuple[int, int], ...]   # (upper, lower) covering pairs

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "title": self.labels[i],
                    "height": int(self.heights[i]),
                    "average": float(self.average[i]),
                    "is_top": bool(self.is_top[i]),
                }
                for i in range(len(self.labels))
            ],
            "edges": [[self.labels[a], self.labels[b]] for a, b in self.edges],
        }

    def to_dot(self) -> str:
        """DOT text: rank attribute = poset height, fill colour mapped from
        the average score, same-height nodes grouped on one rank."""
        lines = ["digraph dominance {", "  rankdir=TB;",
                 "  node [shape=ellipse, style=filled];"]
        avg = self.average
        span = float(avg.max() - avg.min()) if len(avg) else 0.0
        for i, lab in enumerate(self.labels):
            t = (float(avg[i]) - float(avg.min())) / span if span > 0 else 1.0
            hue = 0.6 * (1.0 - t)   # best scores hot, low scores blue
            lines.append(
                f'  "{_dot_escape(lab)}" [label="{_dot_escape(lab)}", '
                f'rank={int(self.heights[i])}, '
                f'fillcolor="{hue:.3f} 0.450 0.950"];')
        for level in sorted(set(int(h) for h in self.heights)):
            same = [self.labels[i] for i in np.flatnonzero(self.heights == level)]
            row = "; ".join(f'"{_dot_escape(s)}"' for s in same)
            lines.append(f"  {{ rank=same; {row}; }}")
        for a, b in self.edges:
            lines.append(f'  "{_dot_escape(self.labels[a])}" -> '
                         f'"{_dot_escape(self.labels[b])}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def transitive_reduction(poset: DominancePoset) -> HasseDag:
    """Minimal edge set with the relation's reachability (covering pairs
    only): an edge survives unless a two-step path joins its endpoints."""
    rel = poset.relation
    two_step = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    covering = rel & ~two_step
    hs = heights(poset)
    h_arr = np.array([hs[lab] for lab in poset.labels], dtype=np.int64)
    is_top = ~rel.any(axis=0)
    edges = tuple((int(a), int(b)) for a, b in np.argwhere(covering))
    return HasseDag(poset.labels, h_arr, poset.average, is_top, edges)
