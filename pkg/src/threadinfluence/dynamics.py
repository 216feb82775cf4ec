"""Thread-level sentiment dynamics.

For an eligible thread (at least one responding reply and one self-reply)
we track three quantities: the initial post's posterior, the mean posterior
of the originator's self-replies, and the mean posterior of the responding
replies.  The originator's sentiment change is the difference between the
first two.  The series builders below aggregate these across a corpus.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import t as student_t

from threadinfluence.corpus import Corpus, Thread, eligible_threads
from threadinfluence.sentiment.scoring import PostScore


class MissingScoreError(KeyError):
    def __init__(self, post_id: str):
        self.post_id = post_id
        super().__init__(f"no sentiment score for post {post_id!r}")


Scores = Mapping[str, PostScore]


def posterior_of(scores: Scores, post_id: str) -> float:
    try:
        return scores[post_id].posterior
    except KeyError:
        raise MissingScoreError(post_id) from None


@dataclass(frozen=True)
class ThreadSentiment:
    """Sentiment summary of one eligible thread."""

    thread_id: str
    initial: float          # posterior of the initial post
    self_reply_mean: float  # mean posterior over the originator's self-replies
    reply_mean: float       # mean posterior over responding replies
    delta: float            # self_reply_mean - initial
    self_reply_count: int
    reply_count: int


def thread_sentiment(thread: Thread, scores: Scores) -> ThreadSentiment:
    """Per-thread aggregates; requires an eligible thread and full scores."""
    self_replies = thread.self_replies
    replies = thread.responding_replies
    if not self_replies or not replies:
        raise ValueError(f"thread {thread.thread_id!r} is not eligible")
    initial = posterior_of(scores, thread.initial_post.post_id)
    self_mean = float(np.mean([posterior_of(scores, p.post_id) for p in self_replies]))
    reply_mean = float(np.mean([posterior_of(scores, p.post_id) for p in replies]))
    return ThreadSentiment(
        thread_id=thread.thread_id,
        initial=initial,
        self_reply_mean=self_mean,
        reply_mean=reply_mean,
        delta=self_mean - initial,
        self_reply_count=len(self_replies),
        reply_count=len(replies),
    )


def thread_sentiments(corpus: Corpus, scores: Scores) -> list[ThreadSentiment]:
    return [thread_sentiment(t, scores) for t in eligible_threads(corpus)]


# ---------------------------------------------------------------------------
# Series


@dataclass(frozen=True)
class SeriesTable:
    """A plottable (x, y) series, optionally with per-point counts."""

    name: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    counts: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValueError("x and y lengths differ")
        if self.counts is not None and len(self.counts) != len(self.x):
            raise ValueError("counts length differs from x")


def write_series(series: SeriesTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(f"# {series.name}\n")
        writer = csv.writer(handle)
        if series.counts is None:
            writer.writerow(["x", "y"])
            for x, y in zip(series.x, series.y):
                writer.writerow([f"{x:.6g}", f"{y:.6g}"])
        else:
            writer.writerow(["x", "y", "count"])
            for x, y, c in zip(series.x, series.y, series.counts):
                writer.writerow([f"{x:.6g}", f"{y:.6g}", c])


def sentiment_by_position(corpus: Corpus, scores: Scores) -> SeriesTable:
    """Mean originator posterior by own-post position across all threads.

    Position 1 is the initial post, position 2 the first self-reply, and so
    on.  Positions nobody reaches are omitted.
    """
    sums: list[float] = []
    counts: list[int] = []
    for thread in corpus.threads:
        own = [thread.initial_post] + list(thread.self_replies)
        for i, post in enumerate(own):
            if i == len(sums):
                sums.append(0.0)
                counts.append(0)
            sums[i] += posterior_of(scores, post.post_id)
            counts[i] += 1
    return SeriesTable(
        name="originator_sentiment_by_position",
        x=tuple(float(i + 1) for i in range(len(sums))),
        y=tuple(s / c for s, c in zip(sums, counts)),
        counts=tuple(counts),
    )


@dataclass(frozen=True)
class DeltaVsReplyResult:
    """Binned originator change against responding-reply sentiment.

    ``r``/``p`` correlate the bin means (the headline statistic);
    ``r_threads``/``p_threads`` correlate the raw per-thread pairs.
    """

    series: SeriesTable
    r: float
    p: float
    r_threads: float
    p_threads: float
    thread_count: int


def delta_vs_reply_sentiment(
    corpus: Corpus, scores: Scores, bin_count: int = 20
) -> DeltaVsReplyResult:
    """Mean sentiment change binned by mean responding-reply posterior."""
    if bin_count < 1:
        raise ValueError("bin_count must be positive")
    stats = thread_sentiments(corpus, scores)
    if not stats:
        empty = SeriesTable("delta_by_reply_sentiment", (), (), ())
        return DeltaVsReplyResult(empty, math.nan, math.nan, math.nan, math.nan, 0)

    reply_means = np.array([s.reply_mean for s in stats])
    deltas = np.array([s.delta for s in stats])
    # Equal-width bins over [0, 1]; the top edge closes the last bin.
    idx = np.minimum((reply_means * bin_count).astype(int), bin_count - 1)
    xs, ys, ns = [], [], []
    for b in range(bin_count):
        mask = idx == b
        if not mask.any():
            continue
        xs.append((b + 0.5) / bin_count)
        ys.append(float(deltas[mask].mean()))
        ns.append(int(mask.sum()))
    series = SeriesTable(
        name="delta_by_reply_sentiment", x=tuple(xs), y=tuple(ys), counts=tuple(ns)
    )

    r, p = (math.nan, math.nan)
    if len(xs) >= 3 and np.std(ys) > 0:
        r, p = pearson(xs, ys)
    r_t, p_t = (math.nan, math.nan)
    if len(stats) >= 3 and np.std(reply_means) > 0 and np.std(deltas) > 0:
        r_t, p_t = pearson(reply_means, deltas)
    return DeltaVsReplyResult(series, r, p, r_t, p_t, len(stats))


@dataclass(frozen=True)
class TTestResult:
    """One-sample, one-sided t-test of mean > 0."""

    statistic: float
    p_value: float
    df: int
    degenerate: bool = False  # zero-variance sample; statistic is +/-inf


def one_sided_t(values: Sequence[float]) -> TTestResult:
    x = np.asarray(values, dtype=float)
    n = len(x)
    if n < 2:
        raise ValueError("t-test needs at least 2 observations")
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    if sd == 0.0:
        if mean > 0:
            return TTestResult(math.inf, 0.0, n - 1, degenerate=True)
        if mean < 0:
            return TTestResult(-math.inf, 1.0, n - 1, degenerate=True)
        return TTestResult(math.nan, math.nan, n - 1, degenerate=True)
    stat = mean / (sd / math.sqrt(n))
    p = float(student_t.sf(stat, n - 1))
    return TTestResult(stat, p, n - 1)


@dataclass(frozen=True)
class NegativeStartResult:
    """Distribution of sentiment change over negative-start eligible threads."""

    series: SeriesTable
    mean: float
    frac_negative: float
    t_test: TTestResult | None
    thread_count: int
    defined: bool


def delta_histogram_negative_start(
    corpus: Corpus,
    scores: Scores,
    threshold: float = 0.5,
    bin_count: int = 20,
) -> NegativeStartResult:
    """Histogram of delta over threads whose initial post is labeled negative."""
    stats = thread_sentiments(corpus, scores)
    deltas = np.array([s.delta for s in stats if s.initial <= threshold])
    if deltas.size == 0:
        empty = SeriesTable("delta_negative_start", (), (), ())
        return NegativeStartResult(empty, math.nan, math.nan, None, 0, defined=False)

    # Delta lives in [-1, 1]; equal-width bins, top edge closed.
    edges = np.linspace(-1.0, 1.0, bin_count + 1)
    idx = np.minimum(((deltas + 1.0) / 2.0 * bin_count).astype(int), bin_count - 1)
    counts = np.bincount(idx, minlength=bin_count)
    centers = (edges[:-1] + edges[1:]) / 2.0
    series = SeriesTable(
        name="delta_negative_start",
        x=tuple(float(c) for c in centers),
        y=tuple(float(c) / deltas.size for c in counts),
        counts=tuple(int(c) for c in counts),
    )
    t_test = one_sided_t(deltas) if deltas.size >= 2 else None
    return NegativeStartResult(
        series=series,
        mean=float(deltas.mean()),
        frac_negative=float((deltas < 0).mean()),
        t_test=t_test,
        thread_count=int(deltas.size),
        defined=True,
    )


@dataclass(frozen=True)
class TransitionRates:
    """Threshold-crossing rates between initial and self-reply sentiment.

    A rate is None when its starting category is empty.
    """

    neg_start_turned_pos: float | None
    pos_start_stayed_pos: float | None
    neg_start_count: int
    pos_start_count: int


def transition_rates(
    corpus: Corpus, scores: Scores, threshold: float = 0.5
) -> TransitionRates:
    stats = thread_sentiments(corpus, scores)
    neg = [s for s in stats if s.initial <= threshold]
    pos = [s for s in stats if s.initial > threshold]
    turned = (
        sum(1 for s in neg if s.self_reply_mean > threshold) / len(neg) if neg else None
    )
    stayed = (
        sum(1 for s in pos if s.self_reply_mean > threshold) / len(pos) if pos else None
    )
    return TransitionRates(
        neg_start_turned_pos=turned,
        pos_start_stayed_pos=stayed,
        neg_start_count=len(neg),
        pos_start_count=len(pos),
    )


# ---------------------------------------------------------------------------
# Self-reply timing


@dataclass(frozen=True)
class IntervalCdf:
    first: SeriesTable      # CDF of hours from initial post to first self-reply
    last: SeriesTable       # CDF of hours from initial post to last self-reply
    median_first_hours: float
    thread_count: int


def _empirical_cdf(values: np.ndarray, name: str) -> SeriesTable:
    xs = np.unique(values)
    fractions = np.searchsorted(np.sort(values), xs, side="right") / len(values)
    return SeriesTable(
        name=name,
        x=tuple(float(x) for x in xs),
        y=tuple(float(f) for f in fractions),
    )


def interval_cdf(corpus: Corpus) -> IntervalCdf:
    """Self-reply delay distributions over threads with >= 1 self-reply."""
    first_hours = []
    last_hours = []
    for thread in corpus.threads:
        own = thread.self_replies
        if not own:
            continue
        t0 = thread.initial_post.timestamp
        first_hours.append((own[0].timestamp - t0) / 3600.0)
        last_hours.append((own[-1].timestamp - t0) / 3600.0)
    if not first_hours:
        raise ValueError("no thread has a self-reply")
    first = np.asarray(first_hours)
    last = np.asarray(last_hours)
    return IntervalCdf(
        first=_empirical_cdf(first, "first_self_reply_interval_cdf"),
        last=_empirical_cdf(last, "last_self_reply_interval_cdf"),
        median_first_hours=float(np.median(first)),
        thread_count=len(first_hours),
    )


# ---------------------------------------------------------------------------
# Correlation


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson r and its two-sided p-value (t distribution, n-2 df).

    Bitwise-identical inputs short-circuit to r = 1.0 exactly, avoiding
    round-off from the normalization.  Zero-variance input raises.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if len(xa) != len(ya):
        raise ValueError("x and y lengths differ")
    n = len(xa)
    if n < 3:
        raise ValueError("pearson needs at least 3 points")
    if np.array_equal(xa, ya):
        return 1.0, 0.0
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("pearson is undefined for zero-variance input")
    r = float((dx * dy).sum() / (sx * sy))
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    stat = abs(r) * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(student_t.sf(stat, n - 2))
    return r, min(p, 1.0)
