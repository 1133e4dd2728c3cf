"""XML article model: element trees, absolute element paths and corpora.

Paths use per-tag sibling ordinals, so under a body holding ``ip1, p, p``
the children are addressed ``ip1[1]``, ``p[1]`` and ``p[2]``.
"""

from __future__ import annotations

import json
import re
import xml.parsers.expat
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .text import collapse_whitespace

Step = Tuple[str, int]

_STEP_RE = re.compile(r"([^/\[\]\s]+)\[([1-9][0-9]*)\]")


class XMLParseError(ValueError):
    """Raised for empty or malformed XML input; ``offset`` is the byte index of the failure."""

    def __init__(self, message: str, offset: int, doc_id: Optional[str] = None):
        where = f"{doc_id}: " if doc_id else ""
        super().__init__(f"{where}{message} (byte offset {offset})")
        self.offset = offset
        self.doc_id = doc_id


@dataclass(frozen=True, order=True)
class ElementPath:
    steps: Tuple[Step, ...]

    def __post_init__(self) -> None:
        if not self.steps:
            raise ValueError("an element path needs at least one step")
        for tag, ordinal in self.steps:
            if not tag or ordinal < 1:
                raise ValueError(f"invalid path step {tag!r}[{ordinal}]")

    @classmethod
    def parse(cls, text: str) -> "ElementPath":
        text = text.strip()
        if not text.startswith("/"):
            raise ValueError(f"element path must be absolute: {text!r}")
        steps = []
        for part in text[1:].split("/"):
            m = _STEP_RE.fullmatch(part)
            if m is None:
                raise ValueError(f"malformed path step {part!r} in {text!r}")
            steps.append((m.group(1), int(m.group(2))))
        return cls(tuple(steps))

    def __str__(self) -> str:
        return "".join(f"/{tag}[{ordinal}]" for tag, ordinal in self.steps)

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def tag(self) -> str:
        return self.steps[-1][0]

    @property
    def parent(self) -> Optional["ElementPath"]:
        if len(self.steps) == 1:
            return None
        return ElementPath(self.steps[:-1])

    def prefixes(self) -> Iterator["ElementPath"]:
        """Yield every ancestor-or-self path, shortest first."""
        for i in range(1, len(self.steps) + 1):
            yield ElementPath(self.steps[:i])

    def child(self, tag: str, ordinal: int) -> "ElementPath":
        return ElementPath(self.steps + ((tag, ordinal),))


def is_proper_ancestor(a: ElementPath, b: ElementPath) -> bool:
    return len(a.steps) < len(b.steps) and b.steps[: len(a.steps)] == a.steps


class Element:
    """A parsed XML element.

    ``content`` interleaves text fragments (``str``) and child elements in
    document order. ``path`` and ``order`` (pre-order index) are assigned
    once the owning document is finalised.
    """

    __slots__ = ("tag", "attributes", "content", "parent", "path", "order")

    def __init__(self, tag: str, attributes: Optional[Dict[str, str]] = None, parent: Optional["Element"] = None):
        self.tag = tag
        self.attributes = dict(attributes or {})
        self.content: List[Union[str, "Element"]] = []
        self.parent = parent
        self.path: Optional[ElementPath] = None
        self.order = -1

    @property
    def children(self) -> List["Element"]:
        return [c for c in self.content if isinstance(c, Element)]

    def iter(self) -> Iterator["Element"]:
        """Pre-order traversal of this element and its descendants."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def fragments(self) -> Iterator[str]:
        for item in self.content:
            if isinstance(item, Element):
                yield from item.fragments()
            else:
                yield item

    def text(self) -> str:
        # element boundaries separate words: <p>alpha</p><p>beta</p> is two tokens
        return collapse_whitespace(" ".join(self.fragments()))

    def __repr__(self) -> str:
        return f"<Element {self.path or self.tag}>"


def _assign_paths(root: Element) -> None:
    root.path = ElementPath(((root.tag, 1),))
    order = 0
    for node in root.iter():
        node.order = order
        order += 1
        seen: Dict[str, int] = {}
        for child in node.children:
            seen[child.tag] = seen.get(child.tag, 0) + 1
            child.path = node.path.child(child.tag, seen[child.tag])


class Document:
    def __init__(self, doc_id: str, root: Element):
        self.doc_id = doc_id
        self.root = root
        _assign_paths(root)
        self._by_path = {node.path: node for node in root.iter()}

    def iter(self) -> Iterator[Element]:
        return self.root.iter()

    def find(self, path: Union[ElementPath, str]) -> Optional[Element]:
        if isinstance(path, str):
            path = ElementPath.parse(path)
        return self._by_path.get(path)

    def text(self) -> str:
        return self.root.text()

    def order_of(self, path: ElementPath) -> int:
        node = self._by_path.get(path)
        if node is None:
            raise KeyError(f"{path} not in document {self.doc_id}")
        return node.order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return NotImplemented
        return self.doc_id == other.doc_id and _node_to_json(self.root) == _node_to_json(other.root)

    def __repr__(self) -> str:
        return f"<Document {self.doc_id}>"


def absolute_path(node: Element) -> ElementPath:
    if node.path is None:
        raise ValueError("element is not attached to a parsed document")
    return node.path


def parse_document(xml_bytes: Union[bytes, str], doc_id: str) -> Document:
    """Parse one well-formed XML article into a :class:`Document`.

    Undeclared entities in documents that reference an external DTD are
    dropped (the DTD is never loaded); predefined and character entities
    are resolved.
    """
    if isinstance(xml_bytes, str):
        xml_bytes = xml_bytes.encode("utf-8")
    if not xml_bytes.strip():
        raise XMLParseError("empty document", 0, doc_id)

    parser = xml.parsers.expat.ParserCreate()
    parser.buffer_text = True
    parser.ordered_attributes = False
    stack: List[Element] = []
    roots: List[Element] = []

    def start(tag, attrs):
        node = Element(tag, attrs, stack[-1] if stack else None)
        if stack:
            stack[-1].content.append(node)
        else:
            roots.append(node)
        stack.append(node)

    def end(tag):
        stack.pop()

    def chars(data):
        if stack:
            stack[-1].content.append(data)

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    parser.SkippedEntityHandler = lambda name, is_param: None
    try:
        parser.Parse(xml_bytes, True)
    except xml.parsers.expat.ExpatError as exc:
        raise XMLParseError(xml.parsers.expat.ErrorString(exc.code), parser.ErrorByteIndex, doc_id) from None
    return Document(doc_id, roots[0])


class Corpus:
    """Documents keyed by doc_id, iterated in storage order."""

    def __init__(self, documents: Iterable[Document] = ()):
        self._docs: Dict[str, Document] = {}
        for doc in documents:
            self.add(doc)

    def add(self, doc: Document) -> None:
        if doc.doc_id in self._docs:
            raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
        self._docs[doc.doc_id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs.values())

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def __getitem__(self, doc_id: str) -> Document:
        return self._docs[doc_id]

    @property
    def doc_ids(self) -> List[str]:
        return list(self._docs)


def ingest(documents: Iterable[Document]) -> Corpus:
    """Build a corpus whose storage order is lexicographic by doc_id, whatever order documents arrive in."""
    return Corpus(sorted(documents, key=lambda d: d.doc_id))


def doc_id_for(path: Path, root: Path) -> str:
    return path.relative_to(root).with_suffix("").as_posix()


def load_corpus(root_dir: Union[str, Path]) -> Corpus:
    root = Path(root_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    docs = [parse_document(p.read_bytes(), doc_id_for(p, root)) for p in sorted(root.rglob("*.xml"))]
    return ingest(docs)


# -- persistence ------------------------------------------------------------

MANIFEST_NAME = "manifest.txt"
CORPUS_NAME = "corpus.jsonl"


def write_manifest(corpus: Corpus, path: Union[str, Path]) -> None:
    Path(path).write_text("".join(f"{doc_id}\n" for doc_id in corpus.doc_ids), encoding="utf-8")


def read_manifest(path: Union[str, Path]) -> List[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip()]


def _node_to_json(node: Element) -> list:
    content = [item if isinstance(item, str) else _node_to_json(item) for item in node.content]
    return [node.tag, node.attributes, content]


def _node_from_json(data: Sequence, parent: Optional[Element] = None) -> Element:
    tag, attrs, content = data
    node = Element(tag, attrs, parent)
    for item in content:
        node.content.append(item if isinstance(item, str) else _node_from_json(item, node))
    return node


def save_corpus(corpus: Corpus, out_dir: Union[str, Path]) -> None:
    """Write the manifest (storage order) and the parsed trees to ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_manifest(corpus, out / MANIFEST_NAME)
    with open(out / CORPUS_NAME, "w", encoding="utf-8") as fh:
        for doc in corpus:
            record = {"doc_id": doc.doc_id, "root": _node_to_json(doc.root)}
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def load_saved_corpus(in_dir: Union[str, Path]) -> Corpus:
    src = Path(in_dir)
    docs = {}
    with open(src / CORPUS_NAME, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                record = json.loads(line)
                docs[record["doc_id"]] = Document(record["doc_id"], _node_from_json(record["root"]))
    order = read_manifest(src / MANIFEST_NAME)
    if sorted(order) != sorted(docs):
        raise ValueError(f"{src}: manifest and stored documents disagree")
    return Corpus(docs[doc_id] for doc_id in order)
