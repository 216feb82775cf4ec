"""Influential responding replies (IRRs) and per-user influence counts.

A responding reply is influential when it lands in the window where it
could have swayed the originator, and its sentiment agrees with the
direction the originator actually moved:

    1. it falls strictly between the initial post and the originator's
       first self-reply in (timestamp, post_id) order, and
    2. its posterior is above the threshold when the first self-reply's
       posterior rose above the initial post's, or below the threshold
       when it fell.

Threads where the first self-reply's posterior equals the initial post's
contribute no IRRs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from threadinfluence.corpus import Corpus, Thread, eligible_threads, first_self_reply
from threadinfluence.dynamics import Scores, pearson, posterior_of


@dataclass(frozen=True)
class IrrRecord:
    thread_id: str
    reply_post_id: str
    responder: str
    polarity: str  # "positive" | "negative"


@dataclass(frozen=True)
class InfluenceCounts:
    """Per-user IRR tallies at one threshold; every corpus user is present."""

    counts: Mapping[str, int]
    threshold: float

    def as_vector(self, users: Sequence[str]) -> np.ndarray:
        return np.array([self.counts[u] for u in users], dtype=float)


def _check_threshold(threshold: float) -> None:
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1); got {threshold}")


def find_irrs(
    thread: Thread, scores: Scores, threshold: float = 0.5
) -> list[IrrRecord]:
    """IRRs of one thread, in thread order.  Ineligible threads yield none."""
    _check_threshold(threshold)
    s1 = first_self_reply(thread)
    if s1 is None or not thread.responding_replies:
        return []
    p0 = thread.initial_post
    initial = posterior_of(scores, p0.post_id)
    moved_to = posterior_of(scores, s1.post_id)
    if moved_to == initial:
        return []
    rising = moved_to > initial

    records = []
    for post in thread.posts[1:]:
        if post.post_id == s1.post_id:
            break
        if post.user_id == thread.originator:
            continue
        posterior = posterior_of(scores, post.post_id)
        if rising and posterior > threshold:
            records.append(IrrRecord(thread.thread_id, post.post_id, post.user_id, "positive"))
        elif not rising and posterior < threshold:
            records.append(IrrRecord(thread.thread_id, post.post_id, post.user_id, "negative"))
    return records


def irr_counts(
    corpus: Corpus, scores: Scores, threshold: float = 0.5
) -> InfluenceCounts:
    """Per-user IRR counts over eligible threads; absent activity counts 0."""
    _check_threshold(threshold)
    counts = {user: 0 for user in sorted(corpus.users)}
    for thread in eligible_threads(corpus):
        for record in find_irrs(thread, scores, threshold):
            counts[record.responder] += 1
    return InfluenceCounts(counts=counts, threshold=threshold)


def early_reply_counts(
    corpus: Corpus,
    window_hours: float = 24.0,
    restrict_eligible: bool = False,
) -> dict[str, int]:
    """Responding replies posted strictly within the window after the initial post."""
    if window_hours <= 0:
        raise ValueError("window_hours must be positive")
    window_seconds = window_hours * 3600.0
    counts = {user: 0 for user in sorted(corpus.users)}
    threads = eligible_threads(corpus) if restrict_eligible else corpus.threads
    for thread in threads:
        t0 = thread.initial_post.timestamp
        for post in thread.responding_replies:
            if post.timestamp - t0 < window_seconds:
                counts[post.user_id] += 1
    return counts


DEFAULT_THRESHOLDS = (0.3, 0.4, 0.5, 0.6, 0.7)


@dataclass(frozen=True)
class SensitivityResult:
    """Pairwise agreement of IRR count vectors across thresholds.

    ``r_matrix[i][j]`` holds the Pearson correlation between per-user
    counts at thresholds i and j; NaN marks pairs undefined because one
    vector has zero variance (``degenerate`` flags which).
    """

    thresholds: tuple[float, ...]
    counts: tuple[InfluenceCounts, ...]
    r_matrix: tuple[tuple[float, ...], ...]
    p_matrix: tuple[tuple[float, ...], ...]
    degenerate: tuple[bool, ...]

    def versus(self, baseline: float = 0.5) -> list[tuple[float, float, float]]:
        """(threshold, r, p) rows against the baseline threshold."""
        if baseline not in self.thresholds:
            raise ValueError(f"baseline {baseline} not among thresholds {self.thresholds}")
        i = self.thresholds.index(baseline)
        return [
            (t, self.r_matrix[i][j], self.p_matrix[i][j])
            for j, t in enumerate(self.thresholds)
            if j != i
        ]


def threshold_sensitivity(
    corpus: Corpus,
    scores: Scores,
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
) -> SensitivityResult:
    """How stable per-user IRR counts are as the class threshold moves."""
    thresholds = tuple(thresholds)
    if not thresholds:
        raise ValueError("need at least one threshold")
    for threshold in thresholds:
        _check_threshold(threshold)

    users = sorted(corpus.users)
    all_counts = tuple(irr_counts(corpus, scores, t) for t in thresholds)
    vectors = [c.as_vector(users) for c in all_counts]
    degenerate = tuple(bool(np.std(v) == 0.0) for v in vectors)

    k = len(thresholds)
    r_matrix = [[1.0] * k for _ in range(k)]
    p_matrix = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            # Identical count vectors agree exactly whatever their size;
            # otherwise r needs non-constant vectors and >= 3 users.
            if np.array_equal(vectors[i], vectors[j]):
                r, p = (1.0, 0.0)
            elif degenerate[i] or degenerate[j] or len(users) < 3:
                r, p = (float("nan"), float("nan"))
            else:
                r, p = pearson(vectors[i], vectors[j])
            r_matrix[i][j] = r_matrix[j][i] = r
            p_matrix[i][j] = p_matrix[j][i] = p
    return SensitivityResult(
        thresholds=thresholds,
        counts=all_counts,
        r_matrix=tuple(tuple(row) for row in r_matrix),
        p_matrix=tuple(tuple(row) for row in p_matrix),
        degenerate=degenerate,
    )


# ---------------------------------------------------------------------------
# File formats


def write_irr_records(
    records: Sequence[IrrRecord], threshold: float, path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["thread_id", "reply_post_id", "responder", "polarity", "threshold"])
        for record in records:
            writer.writerow(
                [record.thread_id, record.reply_post_id, record.responder,
                 record.polarity, f"{threshold:.6g}"]
            )


def write_counts(counts: Mapping[str, int], path: str | Path, header: str = "irr_count") -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["user_id", header])
        for user in sorted(counts):
            writer.writerow([user, counts[user]])
