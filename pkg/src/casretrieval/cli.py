"""Command-line entry point: ``index``, ``run``, ``eval`` and ``cre-filter``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections import OrderedDict
from pathlib import Path
from typing import List, Optional, TextIO

from .cre import coherent_elements
from .doc_model import ElementPath, XMLParseError, load_corpus
from .evaluation import QUANTISATIONS, evaluate_runs, load_assessments, load_gain_table
from .fulltext import DEFAULT_K, DEFAULT_SLOPE
from .pipeline import RetrievalSystem, Strategy
from .runfile import read_run, write_run
from .structural import ANY_ELEMENT, DEFAULT_TABLE, EquivalenceTable, target_scope
from .text import STEMMERS, Analyzer
from .topic import TopicCategory, TopicError, categorize, load_topics, parse_title

log = logging.getLogger("casretrieval")


def _equivalences(path: Optional[str]) -> EquivalenceTable:
    return EquivalenceTable.from_file(path) if path else DEFAULT_TABLE


def cmd_index(args: argparse.Namespace) -> int:
    stopwords = frozenset()
    if args.stopwords:
        stopwords = frozenset(Path(args.stopwords).read_text(encoding="utf-8").split())
    corpus = load_corpus(args.corpus_dir)
    if len(corpus) == 0:
        raise ValueError(f"no .xml files under {args.corpus_dir}")
    system = RetrievalSystem.from_corpus(corpus, Analyzer(stopwords, args.stemmer))
    system.save(args.out)
    log.info("indexed %d articles into %s", len(corpus), args.out)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    system = RetrievalSystem.load(
        args.index,
        equivalences=_equivalences(args.equivalences),
        slope=args.slope,
        prefer_specific=args.prefer_specific,
    )
    topics = load_topics(args.topics)
    entries = system.run_topics(args.strategy, topics, k=args.k)
    write_run(entries, args.out)
    log.info("wrote %d entries for %d topics to %s", len(entries), len(topics), args.out)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    q = load_gain_table(args.gains) if args.gains else QUANTISATIONS[args.quantisation]
    category = None if args.category == "all" else TopicCategory(args.category)
    category_map = {}
    if args.topics:
        category_map = {t.topic_id: categorize(parse_title(t.title_expr)) for t in load_topics(args.topics)}
    elif category is not None:
        raise ValueError("--category article/specific needs --topics to classify topics")
    report = evaluate_runs(read_run(args.run), load_assessments(args.assessments), q, category_map)
    print(report.format_table(category))
    if args.tsv:
        Path(args.tsv).write_text(report.to_tsv(), encoding="utf-8")
    return 0


def cre_filter(stream_in: TextIO, stream_out: TextIO, scope=ANY_ELEMENT, prefer_specific: bool = False) -> None:
    """Read ``doc_id<TAB>path`` lines grouped by article; write ``doc_id<TAB>path<TAB>rank``."""
    groups: "OrderedDict[str, List[ElementPath]]" = OrderedDict()
    for lineno, line in enumerate(stream_in, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise ValueError(f"line {lineno}: expected doc_id<TAB>path")
        paths = groups.setdefault(fields[0], [])
        path = ElementPath.parse(fields[1])
        if path not in paths:
            paths.append(path)
    for doc_id, paths in groups.items():
        for ranked in coherent_elements(paths, scope, prefer_specific=prefer_specific):
            stream_out.write(f"{doc_id}\t{ranked.path}\t{ranked.rank}\n")


def cmd_cre_filter(args: argparse.Namespace) -> int:
    scope = target_scope(args.target, _equivalences(args.equivalences)) if args.target else ANY_ELEMENT
    cre_filter(sys.stdin, sys.stdout, scope, args.prefer_specific)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="casretrieval", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="parse a corpus directory and build both indexes")
    p.add_argument("corpus_dir")
    p.add_argument("--out", required=True, help="index directory to create")
    p.add_argument("--stopwords", help="whitespace-separated stopword file (default: none)")
    p.add_argument("--stemmer", choices=sorted(STEMMERS), default="none")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("run", help="produce a run file for a topic set")
    p.add_argument("--strategy", required=True, choices=[s.value for s in Strategy])
    p.add_argument("--topics", required=True, help="directory of topic XML files")
    p.add_argument("--index", required=True, help="index directory from 'index'")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--slope", type=float, default=DEFAULT_SLOPE)
    p.add_argument("--equivalences", help="tag equivalence file, one class per line")
    p.add_argument("--prefer-specific", action="store_true", help="rank deeper CREs first on equal match counts")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="score a run against assessments")
    p.add_argument("--run", required=True)
    p.add_argument("--assessments", required=True)
    p.add_argument("--quantisation", choices=sorted(QUANTISATIONS), default="strict")
    p.add_argument("--gains", help="e<TAB>s<TAB>gain overrides for the generalised table")
    p.add_argument("--category", choices=["all", "article", "specific"], default="all")
    p.add_argument("--topics", help="topic directory, needed for category breakdowns")
    p.add_argument("--tsv", help="also write the machine-readable report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cre-filter", help="rank CREs for doc_id<TAB>path lines on stdin")
    p.add_argument("--target", help="granularity tag (expanded by equivalences); default: no filter")
    p.add_argument("--equivalences")
    p.add_argument("--prefer-specific", action="store_true")
    p.set_defaults(func=cmd_cre_filter)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, TopicError, XMLParseError) as exc:
        print(f"casretrieval {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
