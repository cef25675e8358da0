"""Parsing of catalogue index pages and MediaWiki page exports."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from urllib.parse import unquote

# internal-link syntax: [[Target]], [[Target|label]], [[Target#Fragment|label]]
_LINK_RE = re.compile(r"\[\[([^\[\]|#]*)(?:#[^\[\]|]*)?(?:\|([^\[\]]*))?\]\]")

# non-article namespaces that never point at a biography
SKIP_NAMESPACES = frozenset(
    {"file", "image", "category", "wikipedia", "template", "help"})


class WikiParseError(ValueError):
    """A page export could not be parsed."""


def normalize_title(raw: str) -> str:
    """Canonical page title: percent-unescaped, underscores to spaces,
    whitespace runs collapsed, first character uppercased.

    Normalising an already-normalised title is a no-op.
    """
    t = unquote(raw).replace("_", " ")
    t = " ".join(t.split())
    if not t:
        return ""
    return t[0].upper() + t[1:]


def is_main_namespace(title: str) -> bool:
    head, sep, _ = title.partition(":")
    if not sep:
        return True
    return head.strip().lower() not in SKIP_NAMESPACES


def extract_links(wikitext: str) -> list[str]:
    """All internal main-namespace link targets, normalised, in order of
    appearance, duplicates preserved."""
    out = []
    for m in _LINK_RE.finditer(wikitext):
        target = normalize_title(m.group(1).lstrip(":"))
        if target and is_main_namespace(target):
            out.append(target)
    return out


@dataclass(frozen=True)
class CatalogueEntry:
    target_title: str
    display_name: str


@dataclass(frozen=True, eq=False)
class CatalogueResult:
    entries: tuple[CatalogueEntry, ...]
    warnings: tuple[str, ...]


def parse_catalogue(wikitext: str) -> CatalogueResult:
    """Biography entries from a catalogue page.

    Only links inside '*' list-item lines count; navigation and header
    links elsewhere on the page are ignored.  The first link of each list
    item is the biography link.  Unparseable list items are skipped and
    reported as warnings.
    """
    entries = []
    warnings = []
    for lineno, line in enumerate(wikitext.splitlines(), 1):
        if not line.startswith("*"):
            continue
        m = _LINK_RE.search(line)
        if m is None:
            if "[[" in line or "]]" in line:
                warnings.append(f"line {lineno}: malformed link syntax")
            continue
        target = normalize_title(m.group(1).lstrip(":"))
        if not target or not is_main_namespace(target):
            warnings.append(f"line {lineno}: no usable biography link")
            continue
        display = (m.group(2) or "").strip() or target
        entries.append(CatalogueEntry(target, display))
    return CatalogueResult(tuple(entries), tuple(warnings))


@dataclass(frozen=True, eq=False)
class BiographyDoc:
    """One exported page: normalised title, raw wikitext, and its outgoing
    internal links (order and duplicates preserved)."""

    title: str
    raw_text: str
    out_links: tuple[str, ...]


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _page_elements(root: ET.Element):
    if _local_name(root.tag) == "page":
        yield root
        return
    for el in root.iter():
        if _local_name(el.tag) == "page":
            yield el


def _doc_from_page(page: ET.Element) -> BiographyDoc:
    title_el = None
    text_el = None
    for el in page.iter():
        name = _local_name(el.tag)
        if name == "title" and title_el is None:
            title_el = el
        elif name == "text" and text_el is None:
            text_el = el
    if title_el is None or title_el.text is None:
        raise WikiParseError("page export is missing the <title> element")
    if text_el is None:
        raise WikiParseError("page export is missing the <text> element")
    text = text_el.text or ""
    return BiographyDoc(normalize_title(title_el.text), text,
                        tuple(extract_links(text)))


def parse_export(xml_text: str) -> list[BiographyDoc]:
    """All pages of a MediaWiki XML export (one or many per file)."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise WikiParseError(f"not well-formed XML: {exc}") from exc
    return [_doc_from_page(p) for p in _page_elements(root)]


def parse_links(doc_xml: str) -> BiographyDoc:
    """The single page of an export file, with its links extracted."""
    docs = parse_export(doc_xml)
    if not docs:
        raise WikiParseError("page export is missing the <page> element")
    if len(docs) > 1:
        raise WikiParseError(f"expected one <page>, found {len(docs)}")
    return docs[0]
