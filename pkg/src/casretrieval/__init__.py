"""Hybrid content-and-structure retrieval over XML article collections."""

from .cre import coherent_elements, identify_cres, rank_cres
from .doc_model import Corpus, Document, ElementPath, absolute_path, is_proper_ancestor, load_corpus, parse_document
from .evaluation import GENERALISED, STRICT, Assessment, average_precision, evaluate_runs, quantise
from .fulltext import FullTextIndex, build_fulltext_index, pivoted_score, search_articles
from .pipeline import RetrievalSystem, Strategy, apply_cre
from .runfile import RunEntry, read_run, write_run
from .structural import MatchMode, MatchQuery, expand_equivalents, match_elements, merge_and_or
from .topic import CasTopic, StructuredQuery, TopicCategory, categorize, parse_title, parse_topic

__version__ = "0.1.0"
