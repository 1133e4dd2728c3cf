"""End-to-end retrieval strategies over a corpus and its full-text index.

=============  ==========================================================
fulltext       top articles by pivoted cosine, whole-article answers
native         articles in storage order, merged AND/OR target elements
native-cre     as native, but each article's answers replaced by its CREs
hybrid         as native, but articles visited in full-text rank order
hybrid-cre     as hybrid, with CREs
=============  ==========================================================

Every strategy caps the total number of entries per topic at ``k``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .cre import coherent_elements
from .doc_model import Corpus, ElementPath, load_saved_corpus, save_corpus
from .fulltext import DEFAULT_K, DEFAULT_SLOPE, INDEX_NAME, FullTextIndex, build_fulltext_index, search_articles
from .runfile import RunEntry, number_entries
from .structural import (
    ANY_ELEMENT,
    DEFAULT_TABLE,
    EquivalenceTable,
    TargetScope,
    match_and_or,
    target_scope,
)
from .text import Analyzer
from .topic import CasTopic, StructuredQuery, parse_title


class Strategy(enum.Enum):
    FULLTEXT = "fulltext"
    NATIVE = "native"
    NATIVE_CRE = "native-cre"
    HYBRID = "hybrid"
    HYBRID_CRE = "hybrid-cre"


ArticleList = Tuple[str, List[ElementPath]]


def apply_cre(
    per_article_lists: Iterable[ArticleList],
    topic: Union[CasTopic, StructuredQuery],
    k: int = DEFAULT_K,
    *,
    corpus: Optional[Corpus] = None,
    table: EquivalenceTable = DEFAULT_TABLE,
    prefer_specific: bool = False,
) -> List[RunEntry]:
    """Replace each article's matching elements with its ranked CREs, keeping article order.

    When ``corpus`` is given, CRE ties are broken by true document order;
    otherwise a structural approximation is used.
    """
    query = parse_title(topic.title_expr) if isinstance(topic, CasTopic) else topic
    topic_id = topic.topic_id if isinstance(topic, CasTopic) else 0
    scope = target_scope(query.target_tag, table)

    def answers():
        for doc_id, paths in per_article_lists:
            if not paths:
                continue
            order = corpus[doc_id].order_of if corpus is not None and doc_id in corpus else None
            for ranked in coherent_elements(paths, scope, prefer_specific=prefer_specific, doc_order=order):
                yield doc_id, ranked.path, None

    return number_entries(topic_id, answers(), k)


@dataclass
class RetrievalSystem:
    corpus: Corpus
    index: FullTextIndex
    equivalences: EquivalenceTable = field(default_factory=lambda: DEFAULT_TABLE)
    slope: float = DEFAULT_SLOPE
    article_k: int = DEFAULT_K  # articles fetched from the full-text ranker by the hybrid strategies
    prefer_specific: bool = False

    @classmethod
    def from_corpus(cls, corpus: Corpus, analyzer: Analyzer = Analyzer(), **kwargs) -> "RetrievalSystem":
        return cls(corpus, build_fulltext_index(corpus, analyzer), **kwargs)

    def _query(self, topic: CasTopic) -> Tuple[StructuredQuery, TargetScope]:
        query = parse_title(topic.title_expr)
        return query, target_scope(query.target_tag, self.equivalences)

    def _ranked_articles(self, query: StructuredQuery, k: int):
        return search_articles(query.about_terms, self.index, k=k, slope=self.slope)

    def _article_lists(self, doc_ids: Iterable[str], terms: Sequence[str], scope: TargetScope) -> Iterator[ArticleList]:
        for doc_id in doc_ids:
            yield doc_id, match_and_or(self.corpus[doc_id], terms, scope)

    def _elements(self, doc_ids: Iterable[str], topic: CasTopic, k: int) -> List[RunEntry]:
        query, scope = self._query(topic)
        answers = (
            (doc_id, path, None)
            for doc_id, paths in self._article_lists(doc_ids, query.about_terms, scope)
            for path in paths
        )
        return number_entries(topic.topic_id, answers, k)

    def _cre(self, doc_ids: Iterable[str], topic: CasTopic, k: int) -> List[RunEntry]:
        query, _ = self._query(topic)
        lists = self._article_lists(doc_ids, query.about_terms, ANY_ELEMENT)
        return apply_cre(
            lists, topic, k, corpus=self.corpus, table=self.equivalences, prefer_specific=self.prefer_specific
        )

    def _hybrid_order(self, topic: CasTopic) -> List[str]:
        query, _ = self._query(topic)
        return [r.doc_id for r in self._ranked_articles(query, self.article_k)]

    def run_fulltext(self, topic: CasTopic, k: int = DEFAULT_K) -> List[RunEntry]:
        query, _ = self._query(topic)
        answers = ((r.doc_id, self.corpus[r.doc_id].root.path, r.score) for r in self._ranked_articles(query, k))
        return number_entries(topic.topic_id, answers, k)

    def run_native(self, topic: CasTopic, k: int = DEFAULT_K) -> List[RunEntry]:
        return self._elements(self.corpus.doc_ids, topic, k)

    def run_hybrid(self, topic: CasTopic, k: int = DEFAULT_K) -> List[RunEntry]:
        return self._elements(self._hybrid_order(topic), topic, k)

    def run_native_cre(self, topic: CasTopic, k: int = DEFAULT_K) -> List[RunEntry]:
        return self._cre(self.corpus.doc_ids, topic, k)

    def run_hybrid_cre(self, topic: CasTopic, k: int = DEFAULT_K) -> List[RunEntry]:
        return self._cre(self._hybrid_order(topic), topic, k)

    def run(self, strategy: Union[Strategy, str], topic: CasTopic, k: int = DEFAULT_K) -> List[RunEntry]:
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        strategy = Strategy(strategy)
        runner = {
            Strategy.FULLTEXT: self.run_fulltext,
            Strategy.NATIVE: self.run_native,
            Strategy.NATIVE_CRE: self.run_native_cre,
            Strategy.HYBRID: self.run_hybrid,
            Strategy.HYBRID_CRE: self.run_hybrid_cre,
        }[strategy]
        return runner(topic, k)

    def run_topics(self, strategy: Union[Strategy, str], topics: Iterable[CasTopic], k: int = DEFAULT_K) -> List[RunEntry]:
        entries: List[RunEntry] = []
        for topic in sorted(topics, key=lambda t: t.topic_id):
            entries.extend(self.run(strategy, topic, k))
        return entries

    # index directory

    def save(self, out_dir: Union[str, Path]) -> None:
        save_corpus(self.corpus, out_dir)
        self.index.save(Path(out_dir) / INDEX_NAME)

    @classmethod
    def load(cls, index_dir: Union[str, Path], **kwargs) -> "RetrievalSystem":
        index_dir = Path(index_dir)
        if not (index_dir / INDEX_NAME).is_file():
            raise FileNotFoundError(f"no full-text index in {index_dir}")
        corpus = load_saved_corpus(index_dir)
        index = FullTextIndex.load(index_dir / INDEX_NAME)
        if sorted(index.doc_lengths) != sorted(corpus.doc_ids):
            raise ValueError(f"{index_dir}: index and stored corpus cover different documents")
        return cls(corpus, index, **kwargs)
