"""Build the biography network from parsed catalogues and page exports."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, canonical_graph
from .wikitext import (BiographyDoc, CatalogueEntry, parse_catalogue,
                       parse_export)


def build_network(biographies: Sequence[str], docs: Iterable[BiographyDoc]) -> Graph:
    """Undirected simple graph with one node per biography and an edge when
    either page links to the other.

    Every document title must belong to the biography set; links pointing
    outside the set produce no edge.  Repeated links collapse and
    self-links are dropped.
    """
    labels = tuple(dict.fromkeys(biographies))
    index = {t: i for i, t in enumerate(labels)}
    pairs: set[tuple[int, int]] = set()
    for doc in docs:
        try:
            u = index[doc.title]
        except KeyError:
            raise ValueError(
                f"document {doc.title!r} is not in the biography set") from None
        for target in doc.out_links:
            v = index.get(target)
            if v is None or v == u:
                continue
            pairs.add((u, v) if u < v else (v, u))
    if pairs:
        arr = np.array(sorted(pairs), dtype=np.int64)
        return canonical_graph(labels, arr[:, 0], arr[:, 1])
    empty = np.empty(0, dtype=np.int64)
    return canonical_graph(labels, empty, empty.copy())


def count_directed_links(biographies: Sequence[str],
                         docs: Iterable[BiographyDoc]) -> int:
    """Distinct ordered biography-to-biography hyperlinks (self-links and
    repeats of the same ordered pair not counted)."""
    members = set(biographies)
    seen: set[tuple[str, str]] = set()
    for doc in docs:
        for target in doc.out_links:
            if target != doc.title and target in members:
                seen.add((doc.title, target))
    return len(seen)


@dataclass(frozen=True, eq=False)
class ExtractResult:
    graph: Graph
    biographies: tuple[str, ...]
    entries: tuple[CatalogueEntry, ...]
    manifest: dict


def _read_sorted(directory: Path) -> list[Path]:
    files = sorted(p for p in Path(directory).iterdir() if p.is_file())
    if not files:
        raise FileNotFoundError(f"no input files in {directory}")
    return files


def extract_from_dirs(catalogue_dir, pages_dir) -> ExtractResult:
    """Full extraction: catalogue pages -> biography list, page exports ->
    links, then the network.  Degenerate inputs are counted in the
    manifest rather than aborting the run."""
    entries: dict[str, CatalogueEntry] = {}
    catalogue_warnings: list[str] = []
    for path in _read_sorted(catalogue_dir):
        result = parse_catalogue(path.read_text(encoding="utf-8"))
        catalogue_warnings.extend(f"{path.name}: {w}" for w in result.warnings)
        for entry in result.entries:
            entries.setdefault(entry.target_title, entry)
    if not entries:
        raise ValueError(f"no biographies parsed from {catalogue_dir}")
    biographies = tuple(entries)

    docs: list[BiographyDoc] = []
    skipped_pages = 0
    duplicate_pages = 0
    seen_titles: set[str] = set()
    for path in _read_sorted(pages_dir):
        for doc in parse_export(path.read_text(encoding="utf-8")):
            if doc.title not in entries:
                skipped_pages += 1
                continue
            if doc.title in seen_titles:
                duplicate_pages += 1
            seen_titles.add(doc.title)
            docs.append(doc)

    graph = build_network(biographies, docs)
    manifest = {
        "biographies": len(biographies),
        "documents": len(docs),
        "missing_documents": len(biographies) - len(seen_titles),
        "hyperlinks": count_directed_links(biographies, docs),
        "link_instances": sum(len(d.out_links) for d in docs),
        "edges": graph.E,
        "warnings": {
            "catalogue": list(catalogue_warnings),
            "pages_outside_catalogue": skipped_pages,
            "duplicate_page_exports": duplicate_pages,
        },
    }
    return ExtractResult(graph, biographies, tuple(entries.values()), manifest)
