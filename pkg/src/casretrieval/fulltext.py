"""Article-level inverted index ranked with pivoted cosine length normalisation.

Each query term ``t`` present in article ``d`` contributes
``(1 + ln f_dt) * ln(1 + N / f_t)``; the sum is divided by the pivoted
length ``(1 - slope) * avg_dl + slope * dl_d``.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from .doc_model import Corpus
from .text import Analyzer, tokenize

DEFAULT_SLOPE = 0.25
KEYWORD_QUERY_SLOPE = 0.55
DEFAULT_K = 100

INDEX_FORMAT = "casretrieval-fulltext"
INDEX_VERSION = 1
INDEX_NAME = "fulltext.json"


@dataclass
class FullTextIndex:
    postings: Dict[str, List[Tuple[str, int]]]
    doc_lengths: Dict[str, int]
    analyzer: Analyzer = field(default_factory=Analyzer)

    @property
    def num_docs(self) -> int:
        return len(self.doc_lengths)

    @property
    def avg_dl(self) -> float:
        return sum(self.doc_lengths.values()) / len(self.doc_lengths)

    def doc_freq(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def term_freq(self, term: str, doc_id: str) -> int:
        for posting_doc, freq in self.postings.get(term, ()):
            if posting_doc == doc_id:
                return freq
        return 0

    def query_terms(self, terms: Iterable[str]) -> List[str]:
        """Tokenise and normalise query terms like indexed text, dropping duplicates but keeping order."""
        tokens = [tok for term in terms for tok in tokenize(term)]
        return list(dict.fromkeys(self.analyzer.normalize(tokens)))

    # persistence

    def save(self, path: Union[str, Path]) -> None:
        data = {
            "format": INDEX_FORMAT,
            "version": INDEX_VERSION,
            "analyzer": self.analyzer.to_dict(),
            "doc_lengths": sorted(self.doc_lengths.items()),
            "postings": {t: [list(p) for p in self.postings[t]] for t in sorted(self.postings)},
        }
        Path(path).write_text(json.dumps(data, ensure_ascii=False, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FullTextIndex":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if data.get("format") != INDEX_FORMAT:
            raise ValueError(f"{path}: not a full-text index file")
        if data.get("version") != INDEX_VERSION:
            raise ValueError(f"{path}: unsupported index version {data.get('version')}")
        return cls(
            postings={t: [(d, int(f)) for d, f in plist] for t, plist in data["postings"].items()},
            doc_lengths={d: int(n) for d, n in data["doc_lengths"]},
            analyzer=Analyzer.from_dict(data.get("analyzer")),
        )


def build_fulltext_index(corpus: Corpus, analyzer: Analyzer = Analyzer()) -> FullTextIndex:
    if len(corpus) == 0:
        raise ValueError("cannot index an empty corpus")
    postings: Dict[str, List[Tuple[str, int]]] = {}
    doc_lengths: Dict[str, int] = {}
    # doc_id order keeps postings lists identical whatever the storage order
    for doc_id in sorted(corpus.doc_ids):
        terms = analyzer.terms(corpus[doc_id].text())
        doc_lengths[doc_id] = len(terms)
        for term, freq in sorted(Counter(terms).items()):
            postings.setdefault(term, []).append((doc_id, freq))
    return FullTextIndex(postings, doc_lengths, analyzer)


def _check_slope(slope: float) -> None:
    if not 0.0 <= slope <= 1.0:
        raise ValueError(f"slope must lie in [0, 1], got {slope}")


def pivoted_norm(dl: float, avg_dl: float, slope: float) -> float:
    return (1.0 - slope) * avg_dl + slope * dl


def term_weight(f_dt: int, f_t: int, n_docs: int) -> float:
    return (1.0 + math.log(f_dt)) * math.log(1.0 + n_docs / f_t)


def pivoted_score(query_terms: Iterable[str], doc_id: str, index: FullTextIndex, slope: float = DEFAULT_SLOPE) -> float:
    _check_slope(slope)
    if doc_id not in index.doc_lengths:
        raise KeyError(f"document not indexed: {doc_id!r}")
    total = 0.0
    for term in index.query_terms(query_terms):
        f_dt = index.term_freq(term, doc_id)
        if f_dt:
            total += term_weight(f_dt, index.doc_freq(term), index.num_docs)
    if total == 0.0:
        return 0.0
    return total / pivoted_norm(index.doc_lengths[doc_id], index.avg_dl, slope)


@dataclass(frozen=True)
class RankedArticle:
    doc_id: str
    score: float


def search_articles(
    query_terms: Sequence[str],
    index: FullTextIndex,
    k: int = DEFAULT_K,
    slope: float = DEFAULT_SLOPE,
) -> List[RankedArticle]:
    """Top-``k`` articles with a positive score, best first, ties by ascending doc_id."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    _check_slope(slope)
    n_docs = index.num_docs
    acc: Dict[str, float] = {}
    for term in index.query_terms(query_terms):
        plist = index.postings.get(term)
        if not plist:
            continue
        f_t = len(plist)
        for doc_id, f_dt in plist:
            acc[doc_id] = acc.get(doc_id, 0.0) + term_weight(f_dt, f_t, n_docs)
    avg_dl = index.avg_dl
    ranked = [
        RankedArticle(doc_id, weight / pivoted_norm(index.doc_lengths[doc_id], avg_dl, slope))
        for doc_id, weight in acc.items()
        if weight > 0.0
    ]
    ranked.sort(key=lambda r: (-r.score, r.doc_id))
    return ranked[:k]
