import numpy as np
import pytest

from wikirank.extract import (build_network, count_directed_links,
                              extract_from_dirs)
from wikirank.wikitext import BiographyDoc


def doc(title, links):
    return BiographyDoc(title, "", tuple(links))


def test_repeated_links_give_one_edge():
    g = build_network(["A", "B"], [doc("A", ["B"] * 5)])
    assert g.E == 1


def test_self_links_dropped():
    g = build_network(["A"], [doc("A", ["A", "A"])])
    assert g.N == 1
    assert g.E == 0


def test_union_of_directions():
    g = build_network(["A", "B", "C"], [doc("A", ["B"]), doc("C", ["A"])])
    edges = {tuple(sorted(e)) for e in g.edge_labels()}
    assert edges == {("A", "B"), ("A", "C")}


def test_direction_symmetry():
    rng = np.random.default_rng(21)
    names = [f"P{i}" for i in range(12)]
    for _ in range(20):
        links = [(a, b) for a in names for b in names
                 if a != b and rng.random() < 0.15]
        fwd = {}
        rev = {}
        for a, b in links:
            fwd.setdefault(a, []).append(b)
            rev.setdefault(b, []).append(a)
        g1 = build_network(names, [doc(t, ls) for t, ls in fwd.items()])
        g2 = build_network(names, [doc(t, ls) for t, ls in rev.items()])
        assert g1.labels == g2.labels
        assert (g1.edges_u == g2.edges_u).all()
        assert (g1.edges_v == g2.edges_v).all()


def test_node_count_is_biography_count():
    g = build_network(["A", "B", "C", "D"], [doc("A", ["B"])])
    assert g.N == 4
    assert set(g.labels) == {"A", "B", "C", "D"}


def test_links_outside_biography_set_ignored():
    g = build_network(["A", "B"], [doc("A", ["B", "Somebody Else"])])
    assert g.E == 1


def test_unknown_document_rejected():
    with pytest.raises(ValueError, match="not in the biography set"):
        build_network(["A"], [doc("Z", ["A"])])


def test_count_directed_links():
    docs = [doc("A", ["B", "B", "C"]), doc("B", ["A"]), doc("C", ["C"])]
    assert count_directed_links(["A", "B", "C"], docs) == 3


CATALOGUE_A = """\
Header with [[Ignored Link]].
* [[Ada Lovelace|Lovelace, Ada]]
* [[Charles Babbage|Babbage, Charles]]
* [[malformed entry
"""

CATALOGUE_B = """\
* [[Alan Turing|Turing, Alan]]
"""

PAGES_1 = """\
<mediawiki>
  <page><title>Ada Lovelace</title><revision><text>
worked with [[Charles Babbage]] on the [[Analytical Engine]].
[[Category:Mathematicians]]
  </text></revision></page>
  <page><title>Charles Babbage</title><revision><text>
… [[Ada Lovelace|Lovelace]] and later [[Alan Turing]] cited him.
  </text></revision></page>
</mediawiki>
"""

PAGES_2 = """\
<mediawiki>
  <page><title>Alan Turing</title><revision><text>no links here</text></revision></page>
  <page><title>Unlisted Person</title><revision><text>[[Ada Lovelace]]</text></revision></page>
</mediawiki>
"""


@pytest.fixture
def wiki_dirs(tmp_path):
    cat = tmp_path / "catalogues"
    pages = tmp_path / "pages"
    cat.mkdir()
    pages.mkdir()
    (cat / "list_a.txt").write_text(CATALOGUE_A, encoding="utf-8")
    (cat / "list_b.txt").write_text(CATALOGUE_B, encoding="utf-8")
    (pages / "batch1.xml").write_text(PAGES_1, encoding="utf-8")
    (pages / "batch2.xml").write_text(PAGES_2, encoding="utf-8")
    return cat, pages


def test_extract_from_dirs(wiki_dirs):
    cat, pages = wiki_dirs
    result = extract_from_dirs(cat, pages)
    assert result.biographies == ("Ada Lovelace", "Charles Babbage",
                                  "Alan Turing")
    edges = {tuple(sorted(e)) for e in result.graph.edge_labels()}
    assert edges == {("Ada Lovelace", "Charles Babbage"),
                     ("Alan Turing", "Charles Babbage")}
    m = result.manifest
    assert m["biographies"] == 3
    assert m["edges"] == 2
    # Ada->Babbage, Babbage->Ada, Babbage->Turing
    assert m["hyperlinks"] == 3
    assert m["missing_documents"] == 0
    assert m["warnings"]["pages_outside_catalogue"] == 1
    assert len(m["warnings"]["catalogue"]) == 1


def test_extract_empty_catalogue_errors(tmp_path):
    cat = tmp_path / "cat"
    pages = tmp_path / "pages"
    cat.mkdir()
    pages.mkdir()
    (cat / "empty.txt").write_text("no list items\n", encoding="utf-8")
    (pages / "p.xml").write_text(
        "<page><title>X</title><revision><text>t</text></revision></page>",
        encoding="utf-8")
    with pytest.raises(ValueError, match="no biographies"):
        extract_from_dirs(cat, pages)


def test_extract_missing_files(tmp_path):
    empty = tmp_path / "none"
    empty.mkdir()
    with pytest.raises(FileNotFoundError):
        extract_from_dirs(empty, empty)
