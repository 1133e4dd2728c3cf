"""Tokenisation shared by the topic parser, the full-text index and the element matcher."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

_TOKEN_RE = re.compile(r"[^\W_]+")
_SPACE_RE = re.compile(r"\s+")


def tokenize(text: str) -> List[str]:
    """Lowercase ``text`` and split it on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


def collapse_whitespace(text: str) -> str:
    return _SPACE_RE.sub(" ", text).strip()


def s_stem(term: str) -> str:
    # Harman's "S" stemmer: only strips common English plural endings.
    if len(term) > 3 and term.endswith("ies") and not term.endswith(("eies", "aies")):
        return term[:-3] + "y"
    if len(term) > 2 and term.endswith("es") and not term.endswith(("aes", "ees", "oes")):
        return term[:-1]
    if len(term) > 1 and term.endswith("s") and not term.endswith(("us", "ss")):
        return term[:-1]
    return term


STEMMERS = {"none": None, "s": s_stem}


@dataclass(frozen=True)
class Analyzer:
    """Term normalisation applied after tokenisation.

    Both hooks are off by default so the plain lowercase tokeniser is what
    gets indexed and queried.
    """

    stopwords: frozenset = field(default_factory=frozenset)
    stemmer: str = "none"

    def __post_init__(self) -> None:
        if self.stemmer not in STEMMERS:
            raise ValueError(f"unknown stemmer {self.stemmer!r}; choose from {sorted(STEMMERS)}")

    def terms(self, text: str) -> List[str]:
        return self.normalize(tokenize(text))

    def normalize(self, tokens: Iterable[str]) -> List[str]:
        stem = STEMMERS[self.stemmer]
        out = []
        for tok in tokens:
            if tok in self.stopwords:
                continue
            out.append(stem(tok) if stem else tok)
        return out

    def to_dict(self) -> dict:
        return {"stopwords": sorted(self.stopwords), "stemmer": self.stemmer}

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "Analyzer":
        if not data:
            return cls()
        return cls(stopwords=frozenset(data.get("stopwords", ())), stemmer=data.get("stemmer", "none"))
