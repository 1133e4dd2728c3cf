import itertools
import logging

import pytest
from hypothesis import given, strategies as st

from casretrieval.doc_model import ElementPath
from casretrieval.evaluation import (
    GENERALISED,
    STRICT,
    Assessment,
    UndefinedRecallError,
    average_precision,
    evaluate_runs,
    generalised,
    interpolated_ap,
    load_assessments,
    load_gain_table,
    quantise,
)
from casretrieval.runfile import RunEntry
from casretrieval.topic import TopicCategory

from oracles import ap_brute_force


def path(i):
    return ElementPath((("article", 1), ("p", i)))


def run(topic, docs_paths):
    return [RunEntry(topic, r, d, p) for r, (d, p) in enumerate(docs_paths, start=1)]


def test_quantise_examples():
    assert quantise(STRICT, 3, 3) == 1
    assert quantise(STRICT, 2, 3) == 0
    assert quantise(GENERALISED, 2, 3) == 0.75


@pytest.mark.parametrize("e, s", [(4, 0), (-1, 2), (2, 7)])
def test_quantise_range(e, s):
    with pytest.raises(ValueError):
        quantise(STRICT, e, s)


def test_quantisation_invariants():
    for e, s in itertools.product(range(4), repeat=2):
        assert STRICT.gains[(e, s)] == (1.0 if (e, s) == (3, 3) else 0.0)
        g = GENERALISED.gains[(e, s)]
        if e < 3:
            assert GENERALISED.gains[(e + 1, s)] >= g
        if s < 3:
            assert GENERALISED.gains[(e, s + 1)] >= g
    assert GENERALISED.gains[(0, 0)] == 0 and GENERALISED.gains[(3, 3)] == 1


def test_generalised_overrides(tmp_path):
    f = tmp_path / "gains.tsv"
    f.write_text("# e s gain\n1\t1\t0.1\n")
    q = load_gain_table(f)
    assert quantise(q, 1, 1) == 0.1 and quantise(q, 2, 3) == 0.75
    with pytest.raises(ValueError):
        generalised({(3, 3): 0.5})
    with pytest.raises(ValueError):
        generalised({(1, 1): 0.9})  # exceeds (1, 2)


def test_perfect_and_empty_runs():
    judged = [Assessment(1, "d", path(i), 3, 3) for i in (1, 2)]
    assert average_precision(run(1, [("d", path(1)), ("d", path(2))]), judged) == 1.0
    assert average_precision(run(1, [("d", path(5))]), judged) == 0.0
    assert average_precision([], judged) == 0.0


def test_three_entry_example():
    # gains (1, 0, 1), R = 2
    assert interpolated_ap([1, 0, 1], 2) == pytest.approx(0.8333333333333335, abs=1e-9)
    assert ap_brute_force([1, 0, 1], 2) == pytest.approx(0.8333333333333335, abs=1e-9)


def test_zero_total_gain():
    with pytest.raises(UndefinedRecallError):
        average_precision(run(1, [("d", path(1))]), [Assessment(1, "d", path(1), 2, 3)], STRICT)


def test_unassessed_doc_with_same_path_earns_nothing():
    judged = [Assessment(1, "d1", path(1), 3, 3)]
    assert average_precision(run(1, [("d2", path(1))]), judged) == 0.0


def test_non_contiguous_ranks_rejected():
    with pytest.raises(ValueError):
        average_precision([RunEntry(1, 2, "d", path(1))], [Assessment(1, "d", path(1), 3, 3)])


def test_exhaustive_small_runs_match_oracle():
    for n in range(1, 7):
        for gains in itertools.product((0.0, 1.0), repeat=n):
            hits = int(sum(gains))
            for total in range(max(hits, 1), 4):
                assert interpolated_ap(gains, total) == pytest.approx(ap_brute_force(list(gains), total), abs=1e-9)


gain_lists = st.lists(st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]), max_size=10)


@given(gain_lists, st.floats(0.0, 3.0))
def test_fractional_gains_match_oracle(gains, extra):
    total = sum(gains) + extra
    if total <= 0:
        return
    ap = interpolated_ap(gains, total)
    assert ap == pytest.approx(ap_brute_force(gains, total), abs=1e-9)
    assert 0.0 <= ap <= 1.0


@given(gain_lists, st.integers(1, 5))
def test_trailing_zeros_at_full_recall_do_not_matter(gains, pad):
    total = sum(gains)
    if total <= 0:
        return
    assert interpolated_ap(gains + [0.0] * pad, total) == pytest.approx(interpolated_ap(gains, total), abs=1e-12)


@given(gain_lists, st.data())
def test_moving_higher_gain_earlier_never_hurts(gains, data):
    total = sum(gains) + 1.0
    if len(gains) < 2:
        return
    i = data.draw(st.integers(0, len(gains) - 2))
    j = data.draw(st.integers(i + 1, len(gains) - 1))
    if gains[j] <= gains[i]:
        return
    swapped = list(gains)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert interpolated_ap(swapped, total) >= interpolated_ap(gains, total) - 1e-12


@given(st.lists(st.booleans(), min_size=1, max_size=8))
def test_strict_ap_is_one_iff_relevant_prefix(flags):
    gains = [1.0 if f else 0.0 for f in flags]
    total = sum(gains)
    if total == 0:
        return
    prefix = all(gains[: int(total)])
    assert (interpolated_ap(gains, total) == pytest.approx(1.0)) is prefix


def test_evaluate_runs_means_and_categories(caplog):
    judged = [
        Assessment(1, "d", path(1), 3, 3),
        Assessment(2, "d", path(1), 3, 3),
        Assessment(2, "d", path(2), 3, 3),
        Assessment(3, "d", path(1), 1, 1),  # nothing strict-relevant
    ]
    entries = run(1, [("d", path(1))]) + run(2, [("d", path(9)), ("d", path(1))]) + run(4, [("d", path(1))])
    cats = {1: TopicCategory.ARTICLE, 2: TopicCategory.SPECIFIC, 3: TopicCategory.SPECIFIC}
    with caplog.at_level(logging.WARNING):
        report = evaluate_runs(entries, judged, STRICT, cats)
    ap2 = interpolated_ap([0, 1], 2)
    assert report.per_topic == {1: 1.0, 2: ap2}
    assert set(report.skipped) == {3, 4}
    assert report.mean == pytest.approx((1.0 + ap2) / 2)
    assert report.category_mean(TopicCategory.ARTICLE) == 1.0
    assert report.category_mean(TopicCategory.SPECIFIC) == pytest.approx(ap2)
    assert "no assessments" in caplog.text
    assert "topic\t1\t1.000000" in report.to_tsv()
    assert "mean" in report.format_table()


def test_assessed_topic_missing_from_run_scores_zero():
    report = evaluate_runs([], [Assessment(9, "d", path(1), 3, 3)])
    assert report.per_topic == {9: 0.0}


@given(st.lists(st.floats(0, 1), min_size=1, max_size=12), st.lists(st.booleans(), min_size=12, max_size=12))
def test_all_mean_is_weighted_category_mean(aps, is_article):
    from casretrieval.evaluation import EvalReport

    per_topic = dict(enumerate(aps, start=1))
    cats = {t: TopicCategory.ARTICLE if is_article[t - 1] else TopicCategory.SPECIFIC for t in per_topic}
    report = EvalReport("strict", per_topic, cats)
    counts = report.category_counts()
    weighted = sum(
        (report.category_mean(c) or 0.0) * counts[c.value] for c in TopicCategory
    ) / counts["all"]
    assert report.mean == pytest.approx(weighted, abs=1e-12)


def test_load_assessments(tmp_path):
    f = tmp_path / "a.tsv"
    f.write_text("# header\n86\tic/2000/w6074\t/article[1]/bdy[1]/sec[2]\t3\t3\n")
    (a,) = load_assessments(f)
    assert a == Assessment(86, "ic/2000/w6074", ElementPath.parse("/article[1]/bdy[1]/sec[2]"), 3, 3)
    f.write_text("86\tx\t/article[1]\t3\t3\n86\tx\t/article[1]\t2\t2\n")
    with pytest.raises(ValueError, match="duplicate"):
        load_assessments(f)
    f.write_text("86\tx\t/article[1]\t5\t3\n")
    with pytest.raises(ValueError):
        load_assessments(f)
