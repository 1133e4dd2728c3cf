"""Quantised average precision over 100 interpolated recall points.

This is a documented approximation of INEX's ``inex_eval``: graded
(exhaustiveness, specificity) judgments are quantised to a gain, a run's
cumulative gain gives precision and recall at each rank, and interpolated
precision is averaged over recall levels 0.01, 0.02, ..., 1.00. Only exact
(doc_id, path) matches earn gain.
"""

from __future__ import annotations

import bisect
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .doc_model import ElementPath
from .runfile import RunEntry, check_ranks
from .topic import TopicCategory

log = logging.getLogger(__name__)

RECALL_LEVELS = 100
GRADES = range(4)


class UndefinedRecallError(ValueError):
    """The topic has no assessed gain, so recall cannot be computed."""


def _check_grade(name: str, value: int) -> None:
    if value not in GRADES:
        raise ValueError(f"{name} grade must be 0-3, got {value!r}")


@dataclass(frozen=True)
class Quantisation:
    name: str
    gains: Mapping[Tuple[int, int], float]

    def __call__(self, e: int, s: int) -> float:
        return quantise(self, e, s)


def _strict_table() -> Dict[Tuple[int, int], float]:
    return {(e, s): 1.0 if (e, s) == (3, 3) else 0.0 for e in GRADES for s in GRADES}


_GENERALISED_DEFAULT = {
    (3, 3): 1.0,
    (2, 3): 0.75, (3, 2): 0.75,
    (1, 3): 0.5, (2, 2): 0.5, (3, 1): 0.5,
    (1, 2): 0.25, (2, 1): 0.25, (1, 1): 0.25,
}


def generalised(overrides: Optional[Mapping[Tuple[int, int], float]] = None) -> Quantisation:
    """Generalised quantisation; ``overrides`` replaces entries of the default table."""
    table = {(e, s): 0.0 for e in GRADES for s in GRADES}
    table.update(_GENERALISED_DEFAULT)
    if overrides:
        for (e, s), gain in overrides.items():
            _check_grade("exhaustiveness", e)
            _check_grade("specificity", s)
            table[(e, s)] = float(gain)
    if table[(0, 0)] != 0.0 or table[(3, 3)] != 1.0:
        raise ValueError("generalised gains must map (0,0) to 0 and (3,3) to 1")
    for e in GRADES:
        for s in GRADES:
            g = table[(e, s)]
            if not 0.0 <= g <= 1.0:
                raise ValueError(f"gain for ({e},{s}) outside [0, 1]: {g}")
            if (e < 3 and table[(e + 1, s)] < g) or (s < 3 and table[(e, s + 1)] < g):
                raise ValueError(f"generalised gains must be non-decreasing in both grades (at {e},{s})")
    return Quantisation("generalised", table)


def load_gain_table(path: Union[str, Path]) -> Quantisation:
    """Read ``e<TAB>s<TAB>gain`` rows overriding the default generalised table."""
    overrides = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            e, s, gain = line.split()
            overrides[(int(e), int(s))] = float(gain)
    return generalised(overrides)


STRICT = Quantisation("strict", _strict_table())
GENERALISED = generalised()
QUANTISATIONS = {"strict": STRICT, "generalised": GENERALISED}


def quantise(q: Quantisation, e: int, s: int) -> float:
    _check_grade("exhaustiveness", e)
    _check_grade("specificity", s)
    return q.gains[(e, s)]


@dataclass(frozen=True)
class Assessment:
    topic_id: int
    doc_id: str
    path: ElementPath
    exhaustiveness: int
    specificity: int

    def __post_init__(self) -> None:
        _check_grade("exhaustiveness", self.exhaustiveness)
        _check_grade("specificity", self.specificity)


def load_assessments(path: Union[str, Path]) -> List[Assessment]:
    out = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 tab-separated fields, got {len(fields)}")
            try:
                a = Assessment(int(fields[0]), fields[1], ElementPath.parse(fields[2]), int(fields[3]), int(fields[4]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            key = (a.topic_id, a.doc_id, a.path)
            if key in seen:
                raise ValueError(f"{path}:{lineno}: duplicate assessment for {a.doc_id} {a.path}")
            seen.add(key)
            out.append(a)
    return out


def _gains(run: Sequence[RunEntry], assessments: Sequence[Assessment], q: Quantisation) -> Tuple[List[float], float]:
    judged = {(a.doc_id, a.path): quantise(q, a.exhaustiveness, a.specificity) for a in assessments}
    total = sum(judged.values())
    ordered = sorted(run, key=lambda e: e.rank)
    return [judged.get((e.doc_id, e.path), 0.0) for e in ordered], total


def average_precision(
    run_for_topic: Sequence[RunEntry],
    assessments_for_topic: Sequence[Assessment],
    q: Quantisation = STRICT,
) -> float:
    check_ranks(run_for_topic)
    gains, total = _gains(run_for_topic, assessments_for_topic, q)
    if total <= 0:
        raise UndefinedRecallError("no assessed element has positive gain")
    return interpolated_ap(gains, total)


def interpolated_ap(gains: Sequence[float], total_gain: float) -> float:
    """Mean interpolated precision over recall levels 1/100 .. 100/100."""
    if not gains:
        return 0.0
    precisions = []
    recalls = []
    cum = 0.0
    for i, g in enumerate(gains, start=1):
        cum += g
        precisions.append(cum / i)
        recalls.append(cum / total_gain)
    # best precision at or after each rank
    best_after = precisions[:]
    for i in range(len(best_after) - 2, -1, -1):
        best_after[i] = max(best_after[i], best_after[i + 1])
    scaled = [r * RECALL_LEVELS + 1e-9 for r in recalls]
    acc = 0.0
    for level in range(1, RECALL_LEVELS + 1):
        i = bisect.bisect_left(scaled, level)
        if i < len(scaled):
            acc += best_after[i]
    return acc / RECALL_LEVELS


@dataclass
class EvalReport:
    quantisation: str
    per_topic: Dict[int, float]
    categories: Dict[int, TopicCategory] = field(default_factory=dict)
    skipped: Dict[int, str] = field(default_factory=dict)

    @property
    def mean(self) -> float:
        return _mean(self.per_topic.values())

    def category_mean(self, category: Optional[TopicCategory]) -> Optional[float]:
        """Mean AP over one category (``None`` means all topics); ``None`` when the slice is empty."""
        values = [ap for t, ap in self.per_topic.items() if category is None or self.categories.get(t) is category]
        return _mean(values) if values else None

    def category_counts(self) -> Dict[str, int]:
        counts = {"all": len(self.per_topic)}
        for cat in TopicCategory:
            counts[cat.value] = sum(1 for t in self.per_topic if self.categories.get(t) is cat)
        return counts

    def to_tsv(self) -> str:
        rows = ["kind\tkey\tvalue"]
        for topic_id in sorted(self.per_topic):
            rows.append(f"topic\t{topic_id}\t{self.per_topic[topic_id]:.6f}")
        for topic_id in sorted(self.skipped):
            rows.append(f"skipped\t{topic_id}\t{self.skipped[topic_id]}")
        rows.append(f"mean\tall\t{self.mean:.6f}")
        if self.categories:
            for cat in TopicCategory:
                value = self.category_mean(cat)
                rows.append(f"mean\t{cat.value}\t{'' if value is None else f'{value:.6f}'}")
        return "\n".join(rows) + "\n"

    def format_table(self, category: Optional[TopicCategory] = None) -> str:
        lines = [f"Quantisation: {self.quantisation} (interpolated AP over {RECALL_LEVELS} recall points)"]
        lines.append(f"{'topic':>8}  {'category':<9}  {'AP':>8}")
        for topic_id in sorted(self.per_topic):
            cat = self.categories.get(topic_id)
            if category is not None and cat is not category:
                continue
            lines.append(f"{topic_id:>8}  {cat.value if cat else '-':<9}  {self.per_topic[topic_id]:8.4f}")
        for topic_id in sorted(self.skipped):
            lines.append(f"{topic_id:>8}  skipped: {self.skipped[topic_id]}")
        if category is None:
            lines.append(f"{'mean':>8}  {'all':<9}  {self.mean:8.4f}")
            if self.categories:
                for cat in TopicCategory:
                    value = self.category_mean(cat)
                    shown = "     n/a" if value is None else f"{value:8.4f}"
                    lines.append(f"{'mean':>8}  {cat.value:<9}  {shown}")
        else:
            value = self.category_mean(category)
            shown = "     n/a" if value is None else f"{value:8.4f}"
            lines.append(f"{'mean':>8}  {category.value:<9}  {shown}")
        return "\n".join(lines)


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def evaluate_runs(
    runs: Iterable[RunEntry],
    assessments: Iterable[Assessment],
    q: Quantisation = STRICT,
    category_map: Optional[Mapping[int, TopicCategory]] = None,
) -> EvalReport:
    """Macro-averaged AP over every assessed topic with positive total gain.

    Assessed topics missing from the run score 0. Run topics without
    assessments, and assessed topics whose gains are all zero, are skipped
    with a warning.
    """
    by_topic: Dict[int, List[RunEntry]] = defaultdict(list)
    for entry in runs:
        by_topic[entry.topic_id].append(entry)
    judged: Dict[int, List[Assessment]] = defaultdict(list)
    for a in assessments:
        judged[a.topic_id].append(a)

    per_topic: Dict[int, float] = {}
    skipped: Dict[int, str] = {}
    for topic_id in sorted(set(by_topic) | set(judged)):
        if topic_id not in judged:
            log.warning("topic %s has run entries but no assessments; skipped", topic_id)
            skipped[topic_id] = "no assessments"
            continue
        try:
            per_topic[topic_id] = average_precision(by_topic.get(topic_id, []), judged[topic_id], q)
        except UndefinedRecallError:
            log.warning("topic %s has no positive-gain assessments under %s quantisation; skipped", topic_id, q.name)
            skipped[topic_id] = "no relevant elements"
    return EvalReport(q.name, per_topic, dict(category_map or {}), skipped)
