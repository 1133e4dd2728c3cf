"""Brute-force reference computations used by the tests.

None of these reuse the code paths they check: CREs are found by pairwise
scans over ancestors, scores straight from raw text counts, and AP by
re-scanning the whole run for each recall level.
"""

from __future__ import annotations

import math
import random
import re
from collections import Counter
from itertools import combinations

from casretrieval.doc_model import ElementPath


def cre_brute_force(paths):
    paths = list(paths)
    if len(paths) == 1:
        return {paths[0]}
    candidates = {ElementPath(p.steps[:i]) for p in paths for i in range(1, len(p.steps) + 1)}
    out = set()
    for cand in candidates:
        n = len(cand.steps)
        below = [p for p in paths if len(p.steps) > n and p.steps[:n] == cand.steps]
        # two matches under different children of cand
        if any(a.steps[n] != b.steps[n] for a, b in combinations(below, 2)):
            out.add(cand)
    return out


def random_path_set(rng: random.Random, max_paths=12, max_depth=5):
    tags = ["sec", "p", "ss1", "ip1"]
    size = rng.randint(1, max_paths)
    paths = set()
    while len(paths) < size:
        depth = rng.randint(1, max_depth)
        steps = [("article", 1)] + [(rng.choice(tags), rng.randint(1, 3)) for _ in range(depth - 1)]
        paths.add(ElementPath(tuple(steps)))
    out = sorted(paths, key=lambda p: p.steps)
    rng.shuffle(out)
    return out


def raw_terms(text):
    return re.findall(r"[a-z0-9]+", text.lower())


def pivoted_brute_force(texts: dict, query, slope):
    """Score every document directly from its raw text."""
    counts = {d: Counter(raw_terms(t)) for d, t in texts.items()}
    n = len(texts)
    avg = sum(sum(c.values()) for c in counts.values()) / n
    scores = {}
    for d, c in counts.items():
        num = 0.0
        for term in set(query):
            if c[term]:
                df = sum(1 for other in counts.values() if other[term])
                num += (1 + math.log(c[term])) * math.log(1 + n / df)
        dl = sum(c.values())
        scores[d] = num / ((1 - slope) * avg + slope * dl) if num else 0.0
    return scores


def ap_brute_force(gains, total):
    """Direct loop over the 100 recall levels."""
    acc = 0.0
    for level in range(1, 101):
        t = level / 100
        best = 0.0
        for i in range(1, len(gains) + 1):
            got = sum(gains[:i])
            if got / total >= t - 1e-12:
                best = max(best, got / i)
        acc += best
    return acc / 100
