"""Run entries and the TAB-separated run file format.

A run file starts with the header line
``topic_id<TAB>rank<TAB>doc_id<TAB>path<TAB>score``; the score column may
be empty for strategies that do not score their answers.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Union

from .doc_model import ElementPath

HEADER = ("topic_id", "rank", "doc_id", "path", "score")


@dataclass(frozen=True)
class RunEntry:
    topic_id: int
    rank: int
    doc_id: str
    path: ElementPath
    score: Optional[float] = None


def number_entries(topic_id: int, answers, k: int) -> List[RunEntry]:
    """Turn ``(doc_id, path, score)`` answers into ranked entries, capped at ``k``."""
    out = []
    for doc_id, path, score in answers:
        if len(out) >= k:
            break
        out.append(RunEntry(topic_id, len(out) + 1, doc_id, path, score))
    return out


def check_ranks(entries: Iterable[RunEntry]) -> None:
    by_topic: Dict[int, List[int]] = defaultdict(list)
    for e in entries:
        by_topic[e.topic_id].append(e.rank)
    for topic_id, ranks in by_topic.items():
        if sorted(ranks) != list(range(1, len(ranks) + 1)):
            raise ValueError(f"topic {topic_id}: ranks are not contiguous from 1")


def _format_score(score: Optional[float]) -> str:
    return "" if score is None else repr(float(score))


def write_run(entries: Iterable[RunEntry], out: Union[str, Path, TextIO]) -> None:
    lines = ["\t".join(HEADER)]
    for e in entries:
        lines.append(f"{e.topic_id}\t{e.rank}\t{e.doc_id}\t{e.path}\t{_format_score(e.score)}")
    text = "\n".join(lines) + "\n"
    if hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_run(path: Union[str, Path]) -> List[RunEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if lineno == 1 and fields[0] == HEADER[0]:
                continue
            if len(fields) not in (4, 5):
                raise ValueError(f"{path}:{lineno}: expected 5 tab-separated fields, got {len(fields)}")
            score = fields[4] if len(fields) == 5 else ""
            try:
                entries.append(
                    RunEntry(
                        topic_id=int(fields[0]),
                        rank=int(fields[1]),
                        doc_id=fields[2],
                        path=ElementPath.parse(fields[3]),
                        score=float(score) if score.strip() else None,
                    )
                )
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    check_ranks(entries)
    return entries
