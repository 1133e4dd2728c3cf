"""Coherent Retrieval Elements (CREs) for one article's matching-element list.

A CRE is an element with at least two children whose subtrees hold a
matching element. CREs are ranked by how many matching elements they
contain, then by path length (shorter first), then by document order,
after dropping those whose tag fails the topic's granularity constraint.
A lone matching element is returned as-is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set

from .doc_model import ElementPath, Step, is_proper_ancestor
from .structural import ANY_ELEMENT, TargetScope


class PathTrie:
    """Prefix tree over element paths; each node is one path step."""

    __slots__ = ("children", "terminal", "below")

    def __init__(self) -> None:
        self.children: Dict[Step, PathTrie] = {}
        self.terminal = False
        self.below = 0  # inserted paths strictly below this node

    def insert(self, path: ElementPath) -> None:
        node = self
        for step in path.steps:
            node.below += 1
            node = node.children.setdefault(step, PathTrie())
        node.terminal = True

    def walk(self, prefix=()):
        """Yield ``(steps, node)`` for every node except the (empty) root."""
        for step, child in self.children.items():
            steps = prefix + (step,)
            yield steps, child
            yield from child.walk(steps)


def _check_paths(paths: Sequence[ElementPath]) -> None:
    if not paths:
        raise ValueError("CRE identification needs at least one matching path")
    if len(set(paths)) != len(paths):
        raise ValueError("matching paths contain duplicates")
    roots = {p.steps[0] for p in paths}
    if len(roots) > 1:
        raise ValueError(f"matching paths come from more than one article (roots {sorted(roots)})")


def identify_cres(matching_paths: Sequence[ElementPath]) -> Set[ElementPath]:
    _check_paths(matching_paths)
    if len(matching_paths) == 1:
        return {matching_paths[0]}
    trie = PathTrie()
    for path in matching_paths:
        trie.insert(path)
    # every trie node lies on some matching path, so each child subtree holds a match
    return {ElementPath(steps) for steps, node in trie.walk() if len(node.children) >= 2}


@dataclass(frozen=True)
class CreCandidate:
    path: ElementPath
    match_count: int
    depth: int
    doc_order: int


@dataclass(frozen=True)
class RankedCre:
    rank: int
    path: ElementPath
    match_count: int


def _structural_order(paths: Iterable[ElementPath]) -> Dict[ElementPath, int]:
    # sorting step tuples puts ancestors before descendants and same-tag
    # siblings in ordinal order; a real document order should be passed when known
    return {p: i for i, p in enumerate(sorted(paths, key=lambda p: p.steps))}


def rank_cres(
    cres: Iterable[ElementPath],
    matching_paths: Sequence[ElementPath],
    scope: TargetScope = ANY_ELEMENT,
    *,
    prefer_specific: bool = False,
    doc_order: Optional[Callable[[ElementPath], int]] = None,
) -> List[RankedCre]:
    """Rank CREs by match count (desc), depth (asc) and document order.

    ``prefer_specific`` flips the depth criterion so deeper CREs win ties on
    match count. ``doc_order`` maps a path to its pre-order position in the
    article; without it a structural approximation is used.
    """
    kept = sorted({c for c in cres if scope.accepts(c.tag)}, key=lambda p: p.steps)
    if not kept:
        return []
    if doc_order is None:
        order_map = _structural_order(kept)
        doc_order = order_map.__getitem__

    single = len(matching_paths) == 1
    candidates = []
    for path in kept:
        if single and path == matching_paths[0]:
            count = 1
        else:
            count = sum(1 for m in matching_paths if is_proper_ancestor(path, m))
        candidates.append(CreCandidate(path, count, path.depth, doc_order(path)))

    depth_sign = -1 if prefer_specific else 1
    candidates.sort(key=lambda c: (-c.match_count, depth_sign * c.depth, c.doc_order, c.path.steps))
    return [RankedCre(i, c.path, c.match_count) for i, c in enumerate(candidates, start=1)]


def coherent_elements(
    matching_paths: Sequence[ElementPath],
    scope: TargetScope = ANY_ELEMENT,
    *,
    prefer_specific: bool = False,
    doc_order: Optional[Callable[[ElementPath], int]] = None,
) -> List[RankedCre]:
    """Identify and rank the CREs of one article in a single call."""
    cres = identify_cres(matching_paths)
    return rank_cres(cres, matching_paths, scope, prefer_specific=prefer_specific, doc_order=doc_order)
