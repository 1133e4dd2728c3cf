"""Element matching inside one article.

An element matches when its whole subtree text contains all (AND) or any
(OR) of the query terms. Results come back in document order, either
restricted to a set of target tags or, in most-specific mode, as the
matching elements none of whose children match on their own.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Union

from .doc_model import Document, Element, ElementPath
from .text import tokenize

DEFAULT_EQUIVALENCES = (frozenset({"sec", "ss1", "ss2"}),)


class EquivalenceTable:
    """Tag equivalence classes, e.g. ``sec``, ``ss1`` and ``ss2`` in INEX articles."""

    def __init__(self, classes: Iterable[Iterable[str]] = DEFAULT_EQUIVALENCES):
        self._class_of: Dict[str, FrozenSet[str]] = {}
        for cls in classes:
            members = frozenset(cls)
            if not members:
                continue
            for tag in members:
                if tag in self._class_of:
                    raise ValueError(f"tag {tag!r} appears in more than one equivalence class")
                self._class_of[tag] = members

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "EquivalenceTable":
        """One class per line, tags separated by whitespace; ``#`` starts a comment."""
        classes = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                classes.append(line.split())
        return cls(classes)

    def expand(self, tag: str) -> FrozenSet[str]:
        return self._class_of.get(tag, frozenset({tag}))

    @property
    def classes(self) -> List[FrozenSet[str]]:
        return sorted(set(self._class_of.values()), key=sorted)


DEFAULT_TABLE = EquivalenceTable()


def expand_equivalents(tag: str, table: EquivalenceTable = DEFAULT_TABLE) -> FrozenSet[str]:
    return table.expand(tag)


class MatchMode(enum.Enum):
    AND = "and"
    OR = "or"


@dataclass(frozen=True)
class TargetTags:
    tags: FrozenSet[str]

    def __post_init__(self) -> None:
        if not self.tags:
            raise ValueError("TargetTags needs at least one tag")

    def accepts(self, tag: str) -> bool:
        return tag in self.tags


@dataclass(frozen=True)
class AnyElement:
    def accepts(self, tag: str) -> bool:
        return True


ANY_ELEMENT = AnyElement()
TargetScope = Union[TargetTags, AnyElement]


def target_scope(tag: str, table: EquivalenceTable = DEFAULT_TABLE) -> TargetTags:
    return TargetTags(table.expand(tag))


@dataclass(frozen=True)
class MatchQuery:
    terms: tuple
    mode: MatchMode
    scope: TargetScope = ANY_ELEMENT

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(dict.fromkeys(self.terms)))
        if not self.terms:
            raise ValueError("a match query needs at least one term")


def _contained_terms(doc: Document, terms: FrozenSet[str]) -> Dict[int, FrozenSet[str]]:
    """Map ``id(element)`` to the query terms occurring anywhere in its subtree."""
    nodes = list(doc.iter())
    found: Dict[int, FrozenSet[str]] = {}
    for node in reversed(nodes):  # children before parents
        hits: Set[str] = set()
        for item in node.content:
            if isinstance(item, Element):
                hits |= found[id(item)]
            else:
                hits.update(t for t in tokenize(item) if t in terms)
        found[id(node)] = frozenset(hits)
    return found


def match_elements(doc: Document, query: MatchQuery) -> List[ElementPath]:
    terms = frozenset(query.terms)
    found = _contained_terms(doc, terms)
    if query.mode is MatchMode.AND:
        def ok(node: Element) -> bool:
            return len(found[id(node)]) == len(terms)
    else:
        def ok(node: Element) -> bool:
            return bool(found[id(node)])

    out = []
    for node in doc.iter():
        if not ok(node):
            continue
        if isinstance(query.scope, TargetTags):
            if query.scope.accepts(node.tag):
                out.append(node.path)
        elif not any(ok(child) for child in node.children):
            out.append(node.path)
    return out


def merge_and_or(and_list: Sequence[ElementPath], or_list: Sequence[ElementPath]) -> List[ElementPath]:
    """AND answers first, then the OR answers not already listed."""
    seen = set()
    merged = []
    for path in list(and_list) + list(or_list):
        if path not in seen:
            seen.add(path)
            merged.append(path)
    return merged


def match_and_or(doc: Document, terms: Sequence[str], scope: TargetScope) -> List[ElementPath]:
    """Run both AND and OR queries against ``doc`` and merge the answer lists."""
    and_list = match_elements(doc, MatchQuery(tuple(terms), MatchMode.AND, scope))
    or_list = match_elements(doc, MatchQuery(tuple(terms), MatchMode.OR, scope))
    return merge_and_or(and_list, or_list)
