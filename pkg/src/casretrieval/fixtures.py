"""Bundled golden data: the topic 86 answer-list example and a 10-article synthetic corpus.

Every bundled file is listed with its SHA-256 in ``data/CHECKSUMS``;
:func:`verify_checksums` reports files that were edited by accident.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, List, Tuple

from .doc_model import Corpus, Document, ElementPath, load_corpus, parse_document
from .evaluation import Assessment, load_assessments
from .topic import CasTopic, load_topics, parse_topic

CHECKSUM_FILE = "CHECKSUMS"


def data_dir() -> Path:
    return Path(str(resources.files("casretrieval") / "data"))


@dataclass(frozen=True)
class GoldenCase:
    name: str
    inputs: tuple
    expected: tuple
    provenance: str


def _read_tsv(path: Path) -> List[List[str]]:
    return [line.split("\t") for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def load_table2_case() -> Tuple[List[ElementPath], List[Tuple[int, ElementPath]]]:
    """The nine matching paths of article ic/2000/w6074 and their expected CRE ranking."""
    base = data_dir() / "table2"
    paths = [ElementPath.parse(row[1]) for row in _read_tsv(base / "or_answer_list.tsv")]
    ranking = [(int(row[2]), ElementPath.parse(row[1])) for row in _read_tsv(base / "cre_ranking.tsv")]
    return paths, ranking


def table2_golden() -> GoldenCase:
    paths, ranking = load_table2_case()
    return GoldenCase("topic 86 OR answer list", tuple(paths), tuple(ranking), "INEX 2003 topic 86, article ic/2000/w6074")


TABLE2_DOC_ID = "ic/2000/w6074"


def load_table2_article() -> Document:
    """Synthetic stand-in for ic/2000/w6074 whose OR matches for topic 86 are the nine golden paths."""
    path = data_dir() / "table2" / "ic" / "2000" / "w6074.xml"
    return parse_document(path.read_bytes(), TABLE2_DOC_ID)


def load_topic86() -> CasTopic:
    return parse_topic((data_dir() / "table2" / "topic86.xml").read_bytes())


def mini_corpus_dir() -> Path:
    return data_dir() / "mini_corpus"


def mini_topics_dir() -> Path:
    return data_dir() / "mini_topics"


def mini_assessments_path() -> Path:
    return data_dir() / "mini_assessments.tsv"


def build_mini_corpus() -> Corpus:
    return load_corpus(mini_corpus_dir())


def load_mini_topics() -> List[CasTopic]:
    return load_topics(mini_topics_dir())


def load_mini_assessments() -> List[Assessment]:
    return load_assessments(mini_assessments_path())


def _fixture_files() -> List[Path]:
    root = data_dir()
    return sorted(p for p in root.rglob("*") if p.is_file() and p.name != CHECKSUM_FILE and "__pycache__" not in p.parts)


def compute_checksums() -> Dict[str, str]:
    root = data_dir()
    return {p.relative_to(root).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest() for p in _fixture_files()}


def write_checksums() -> None:
    lines = [f"{digest}  {name}" for name, digest in sorted(compute_checksums().items())]
    (data_dir() / CHECKSUM_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")


def verify_checksums() -> List[str]:
    """Return the names of bundled files that are missing, new, or differ from the recorded digest."""
    recorded = {}
    for line in (data_dir() / CHECKSUM_FILE).read_text(encoding="utf-8").splitlines():
        if line.strip():
            digest, name = line.split(None, 1)
            recorded[name.strip()] = digest
    actual = compute_checksums()
    return sorted(name for name in set(recorded) | set(actual) if recorded.get(name) != actual.get(name))
