"""INEX CAS topics: topic files, title expressions and topic categories.

Only the title subset used by INEX 2003 SCAS topics of the form
``//tag[about(., '...')]`` (optionally preceded by more ``/tag`` or
``//tag`` steps) is accepted. Anything else raises
:class:`UnsupportedQueryError` instead of being approximated.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

from .doc_model import XMLParseError, parse_document
from .text import collapse_whitespace, tokenize


class TopicError(ValueError):
    pass


class UnsupportedQueryError(TopicError):
    def __init__(self, construct: str, expr: str):
        super().__init__(f"unsupported title construct ({construct}): {expr}")
        self.construct = construct


class Axis(enum.Enum):
    CHILD = "/"
    DESCENDANT = "//"


class TopicCategory(enum.Enum):
    ARTICLE = "article"
    SPECIFIC = "specific"


@dataclass(frozen=True)
class CasTopic:
    topic_id: int
    title_expr: str
    description: str = ""
    narrative: str = ""
    keywords: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.topic_id <= 0:
            raise TopicError(f"topic_id must be positive, got {self.topic_id}")
        if not self.title_expr.strip():
            raise TopicError(f"topic {self.topic_id} has an empty title")


@dataclass(frozen=True)
class StructuredQuery:
    target_steps: Tuple[Tuple[Axis, str], ...]
    about_terms: Tuple[str, ...]

    @property
    def target_tag(self) -> str:
        return self.target_steps[-1][1]


def _child_text(doc, tag: str) -> Union[str, None]:
    for node in doc.root.children:
        if node.tag == tag:
            return collapse_whitespace(node.text())
    return None


def parse_topic(topic_xml: Union[bytes, str]) -> CasTopic:
    try:
        doc = parse_document(topic_xml, "topic")
    except XMLParseError as exc:
        raise TopicError(str(exc)) from None
    raw_id = doc.root.attributes.get("topic_id")
    if raw_id is None:
        raise TopicError("topic has no topic_id attribute")
    try:
        topic_id = int(raw_id.strip())
    except ValueError:
        raise TopicError(f"topic_id is not an integer: {raw_id!r}") from None

    title = _child_text(doc, "title")
    if title is None:
        raise TopicError(f"topic {topic_id} has no <title> element")
    keywords_text = _child_text(doc, "keywords") or ""
    keywords = tuple(k.strip() for k in keywords_text.split(",") if k.strip())
    return CasTopic(
        topic_id=topic_id,
        title_expr=title,
        description=_child_text(doc, "description") or "",
        narrative=_child_text(doc, "narrative") or "",
        keywords=keywords,
    )


def load_topics(topic_dir: Union[str, Path]) -> List[CasTopic]:
    """Load every ``*.xml`` topic file under ``topic_dir``, sorted by topic_id."""
    root = Path(topic_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"topic directory not found: {root}")
    topics = []
    for path in sorted(root.rglob("*.xml")):
        try:
            topics.append(parse_topic(path.read_bytes()))
        except TopicError as exc:
            raise TopicError(f"{path}: {exc}") from None
    ids = [t.topic_id for t in topics]
    if len(set(ids)) != len(ids):
        raise TopicError(f"duplicate topic ids in {root}")
    return sorted(topics, key=lambda t: t.topic_id)


# -- title grammar ------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][\w.\-]*")
_ABOUT_RE = re.compile(r"\s*about\s*\(\s*\.\s*,\s*(?:'([^']*)'|\"([^\"]*)\")\s*\)\s*", re.S)
_COMPARISON_RE = re.compile(r"(<=|>=|!=|=|<|>)")


def _read_predicate(expr: str, start: int) -> Tuple[str, int]:
    """Return the text inside ``[...]`` starting at ``expr[start] == '['`` and the index after ``]``."""
    depth = 0
    quote = None
    for i in range(start, len(expr)):
        ch = expr[i]
        if quote:
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                return expr[start + 1 : i], i + 1
    raise TopicError(f"unbalanced predicate brackets: {expr}")


def _classify_predicate(body: str, expr: str) -> UnsupportedQueryError:
    stripped = re.sub(r"'[^']*'|\"[^\"]*\"", "''", body)
    if "@" in stripped:
        return UnsupportedQueryError("attribute test", expr)
    if re.search(r"\b(and|or)\b", stripped):
        return UnsupportedQueryError("boolean combination inside predicate", expr)
    if re.match(r"\s*about\s*\(", stripped):
        return UnsupportedQueryError("about() with a path other than '.'", expr)
    if _COMPARISON_RE.search(stripped) or re.fullmatch(r"\s*\d+\s*", stripped):
        return UnsupportedQueryError("numeric comparison or positional predicate", expr)
    return UnsupportedQueryError(f"predicate [{body.strip()}]", expr)


def parse_title(title_expr: str) -> StructuredQuery:
    expr = title_expr.strip()
    if not expr:
        raise TopicError("empty title expression")
    steps: List[Tuple[Axis, str]] = []
    predicates: List[Tuple[int, str]] = []
    pos = 0
    while pos < len(expr):
        if expr.startswith("//", pos):
            axis, pos = Axis.DESCENDANT, pos + 2
        elif expr.startswith("/", pos):
            axis, pos = Axis.CHILD, pos + 1
        else:
            raise UnsupportedQueryError(f"unexpected text {expr[pos:]!r}", expr)
        if expr.startswith("*", pos):
            raise UnsupportedQueryError("wildcard step", expr)
        if expr.startswith("@", pos):
            raise UnsupportedQueryError("attribute step", expr)
        m = _NAME_RE.match(expr, pos)
        if m is None:
            raise UnsupportedQueryError(f"expected an element name at {expr[pos:]!r}", expr)
        if expr.startswith("(", m.end()):
            raise UnsupportedQueryError("function call step", expr)
        steps.append((axis, m.group(0)))
        pos = m.end()
        while pos < len(expr) and expr[pos].isspace():
            pos += 1
        while pos < len(expr) and expr[pos] == "[":
            body, pos = _read_predicate(expr, pos)
            predicates.append((len(steps) - 1, body))
            while pos < len(expr) and expr[pos].isspace():
                pos += 1
        if pos < len(expr) and expr[pos] == "|":
            raise UnsupportedQueryError("path union", expr)

    if not predicates:
        raise UnsupportedQueryError("missing about() predicate", expr)
    if len(predicates) > 1:
        raise UnsupportedQueryError("multiple predicates", expr)
    step_index, body = predicates[0]
    m = _ABOUT_RE.fullmatch(body)
    if m is None:
        raise _classify_predicate(body, expr)
    if step_index != len(steps) - 1:
        raise UnsupportedQueryError("about() on a non-final step", expr)
    terms = tokenize(m.group(1) if m.group(1) is not None else m.group(2))
    if not terms:
        raise TopicError(f"about() has no searchable terms: {expr}")
    return StructuredQuery(target_steps=tuple(steps), about_terms=tuple(terms))


def categorize(query: StructuredQuery) -> TopicCategory:
    return TopicCategory.ARTICLE if query.target_tag == "article" else TopicCategory.SPECIFIC
