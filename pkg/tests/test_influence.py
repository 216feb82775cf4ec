"""Influential-reply detection, counting, and threshold sensitivity."""

import numpy as np
import pytest

from threadinfluence.influence import (
    DEFAULT_THRESHOLDS,
    early_reply_counts,
    find_irrs,
    irr_counts,
    threshold_sensitivity,
    write_counts,
    write_irr_records,
)
from threadinfluence.sentiment.scoring import PostScore
from tests.conftest import make_thread_corpus


def scored(mapping):
    return {
        pid: PostScore(pid, p, "positive" if p > 0.5 else "negative")
        for pid, p in mapping.items()
    }


def four_post_thread():
    # p0 (orig, negative) -> reply by B (positive) -> reply by C (negative)
    # -> s1 (orig, turned positive): only B's reply matches the rise
    rows = [
        ("p0", "t", "orig", 0),
        ("r1", "t", "B", 10),
        ("r2", "t", "C", 20),
        ("s1", "t", "orig", 30),
    ]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.2, "r1": 0.9, "r2": 0.3, "s1": 0.8})
    return corpus, scores


def test_worked_example_counts_b_only():
    corpus, scores = four_post_thread()
    counts = irr_counts(corpus, scores, 0.5)
    assert counts.counts == {"orig": 0, "B": 1, "C": 0}
    records = find_irrs(corpus.threads[0], scores, 0.5)
    assert len(records) == 1
    assert records[0].reply_post_id == "r1"
    assert records[0].responder == "B"
    assert records[0].polarity == "positive"


def test_falling_sentiment_counts_negative_replies():
    rows = [
        ("p0", "t", "orig", 0),
        ("r1", "t", "B", 10),
        ("r2", "t", "C", 20),
        ("s1", "t", "orig", 30),
    ]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.8, "r1": 0.9, "r2": 0.1, "s1": 0.3})
    counts = irr_counts(corpus, scores, 0.5)
    assert counts.counts == {"orig": 0, "B": 0, "C": 1}


def test_no_change_means_no_irrs():
    corpus, scores = four_post_thread()
    flat = dict(scores)
    flat["s1"] = PostScore("s1", 0.2, "negative")  # equals p0 posterior
    assert sum(irr_counts(corpus, flat, 0.5).counts.values()) == 0


def test_replies_after_first_self_reply_ignored():
    rows = [
        ("p0", "t", "orig", 0),
        ("r1", "t", "B", 10),
        ("s1", "t", "orig", 20),
        ("r2", "t", "C", 30),  # after s1: never an IRR
        ("s2", "t", "orig", 40),
    ]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.2, "r1": 0.9, "r2": 0.9, "s1": 0.8, "s2": 0.9})
    counts = irr_counts(corpus, scores, 0.5)
    assert counts.counts["B"] == 1
    assert counts.counts["C"] == 0


def test_tie_timestamp_resolved_by_post_id():
    # reply shares s1's timestamp; "ra" < "s1" so it is still before s1
    rows = [
        ("p0", "t", "orig", 0),
        ("ra", "t", "B", 20),
        ("s1", "t", "orig", 20),
    ]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.2, "ra": 0.9, "s1": 0.8})
    assert irr_counts(corpus, scores, 0.5).counts["B"] == 1

    # "sz" sorts after "s1": the reply follows s1 and cannot count
    rows = [
        ("p0", "t", "orig", 0),
        ("sz", "t", "B", 20),
        ("s1", "t", "orig", 20),
    ]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.2, "sz": 0.9, "s1": 0.8})
    assert irr_counts(corpus, scores, 0.5).counts["B"] == 0


def test_threshold_is_strict():
    corpus, scores = four_post_thread()
    at_threshold = dict(scores)
    at_threshold["r1"] = PostScore("r1", 0.5, "negative")
    assert irr_counts(corpus, at_threshold, 0.5).counts["B"] == 0


def test_ineligible_threads_contribute_nothing():
    rows = [
        ("a0", "ta", "o1", 0),
        ("a1", "ta", "B", 1),  # no self-reply
        ("b0", "tb", "o2", 0),
        ("b1", "tb", "o2", 1),  # no responding reply
    ]
    corpus = make_thread_corpus(rows)
    scores = scored({"a0": 0.2, "a1": 0.9, "b0": 0.2, "b1": 0.9})
    counts = irr_counts(corpus, scores, 0.5)
    assert set(counts.counts) == {"o1", "o2", "B"}
    assert sum(counts.counts.values()) == 0


def test_counts_cover_every_user_with_zeros():
    corpus, scores = four_post_thread()
    counts = irr_counts(corpus, scores, 0.5)
    assert set(counts.counts) == corpus.users


def test_threshold_rejects_out_of_range():
    corpus, scores = four_post_thread()
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            irr_counts(corpus, scores, bad)


def test_early_reply_window_is_strict():
    rows = [
        ("p0", "t", "orig", 0),
        ("r1", "t", "B", 24 * 3600 - 1),
        ("r2", "t", "C", 24 * 3600),
        ("s1", "t", "orig", 999999),
    ]
    corpus = make_thread_corpus(rows)
    counts = early_reply_counts(corpus, window_hours=24.0)
    assert counts["B"] == 1
    assert counts["C"] == 0


def test_early_reply_eligibility_filter():
    rows = [
        ("a0", "ta", "o1", 0),
        ("a1", "ta", "B", 100),  # thread has no self-reply
    ]
    corpus = make_thread_corpus(rows)
    assert early_reply_counts(corpus, 24.0)["B"] == 1
    assert early_reply_counts(corpus, 24.0, restrict_eligible=True)["B"] == 0


def test_sensitivity_identical_labelings_exactly_one():
    # all posteriors far from every threshold: counts identical across grid
    rows = []
    scores = {}
    for i in range(6):
        tid = f"t{i}"
        rows += [
            (f"{tid}_p0", tid, "o", 0),
            (f"{tid}_r1", tid, f"u{i % 3}", 1),
            (f"{tid}_s1", tid, "o", 2),
        ]
        scores[f"{tid}_p0"] = 0.05
        scores[f"{tid}_r1"] = 0.95 if i % 2 else 0.05
        scores[f"{tid}_s1"] = 0.95
    corpus = make_thread_corpus(rows)
    result = threshold_sensitivity(corpus, scored(scores), DEFAULT_THRESHOLDS)
    for i in range(len(DEFAULT_THRESHOLDS)):
        for j in range(len(DEFAULT_THRESHOLDS)):
            assert result.r_matrix[i][j] == 1.0
            assert result.p_matrix[i][j] == 0.0
    assert not any(result.degenerate)


def test_sensitivity_versus_baseline_rows():
    rows = [("p0", "t", "o", 0), ("r1", "t", "B", 1), ("s1", "t", "o", 2)]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.2, "r1": 0.9, "s1": 0.8})
    result = threshold_sensitivity(corpus, scores, (0.3, 0.5, 0.7))
    rows_out = result.versus(0.5)
    assert [t for t, _, _ in rows_out] == [0.3, 0.7]
    with pytest.raises(ValueError):
        result.versus(0.45)


def test_sensitivity_degenerate_thresholds_flagged():
    # reply posterior 0.4 sits between the thresholds, so the two count
    # vectors differ; with only two users r stays undefined, and the
    # all-zero vector at 0.5 is flagged degenerate
    rows = [("p0", "t", "o", 0), ("r1", "t", "B", 1), ("s1", "t", "o", 2)]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.2, "r1": 0.4, "s1": 0.9})
    result = threshold_sensitivity(corpus, scores, (0.3, 0.5))
    assert result.degenerate == (False, True)
    assert np.isnan(result.r_matrix[0][1])


def test_sensitivity_identical_zero_vectors_agree_exactly():
    # reply posterior below every threshold: zero counts everywhere, and
    # identical vectors agree exactly even when each is constant
    rows = [("p0", "t", "o", 0), ("r1", "t", "B", 1), ("s1", "t", "o", 2)]
    corpus = make_thread_corpus(rows)
    scores = scored({"p0": 0.9, "r1": 0.01, "s1": 0.95})
    result = threshold_sensitivity(corpus, scores, (0.3, 0.5))
    assert all(result.degenerate)
    assert result.r_matrix[0][1] == 1.0


def test_write_records_and_counts(tmp_path):
    corpus, scores = four_post_thread()
    records = find_irrs(corpus.threads[0], scores, 0.5)
    rec_path = tmp_path / "irrs.csv"
    write_irr_records(records, 0.5, rec_path)
    lines = rec_path.read_text().splitlines()
    assert lines[0] == "thread_id,reply_post_id,responder,polarity,threshold"
    assert len(lines) == 2

    counts = irr_counts(corpus, scores, 0.5)
    cnt_path = tmp_path / "counts.csv"
    write_counts(counts.counts, cnt_path)
    lines = cnt_path.read_text().splitlines()
    assert lines[0] == "user_id,irr_count"
    assert "B,1" in lines
