"""Per-user feature vectors: contribution, network, semantic, influence.

Conventions worth knowing:

* ``posts_after_mine`` counts other users' posts that appear after the
  user's first post of each thread, summed over threads.
* ``avg_response_delay_minutes`` averages the gap from each of the user's
  posts to the next post by someone else in the same thread; users who
  never receive a response get the largest delay observed in the corpus.
* ``activity_span_days`` is the difference between last and first active
  UTC day; ``posts_per_span_day`` divides by the inclusive day count
  (span + 1) so single-day users are well-defined.
* Topic features use a supplied per-post topic distribution, or fall back
  to hashing tokens into 20 pseudo-topics.
"""

from __future__ import annotations

import csv
import math
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from threadinfluence.corpus import Corpus
from threadinfluence.graph import DirectedGraph, betweenness, degrees, pagerank
from threadinfluence.influence import InfluenceCounts
from threadinfluence.sentiment.features import hit_strengths, scan_tokens
from threadinfluence.sentiment.lexicons import LexiconSet, default_lexicons

USER_FEATURE_NAMES: tuple[str, ...] = (
    # contribution
    "initial_posts",
    "replies_to_others",
    "threads_touched",
    "posts_after_mine",
    "avg_response_delay_minutes",
    "total_post_bytes",
    "avg_post_bytes",
    "avg_top30_post_bytes",
    "active_days",
    "activity_span_days",
    "posts_per_active_day",
    "posts_per_span_day",
    # network
    "in_degree",
    "out_degree",
    "betweenness",
    "pagerank",
    # semantic
    "pct_positive_words",
    "pct_negative_words",
    "pct_slang",
    "pct_strong_emotion_words",
    "pos_neg_word_ratio",
    "topic_entropy",
    "topic_log_energy",
    # influence
    "irr_count",
)

_SECONDS_PER_DAY = 86400
_TOP_POSTS = 30
_LOG_ENERGY_EPS = 1e-12
DEFAULT_TOPIC_COUNT = 20


@dataclass(frozen=True)
class UserFeatures:
    user_id: str
    values: tuple[float, ...]  # aligned with USER_FEATURE_NAMES

    def __getattr__(self, name: str) -> float:
        try:
            return self.values[USER_FEATURE_NAMES.index(name)]
        except ValueError:
            raise AttributeError(name) from None

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def fallback_topics(tokens: Sequence[str], topic_count: int = DEFAULT_TOPIC_COUNT) -> np.ndarray:
    """Deterministic pseudo-topic distribution by hashing tokens.

    Empty posts get the uniform distribution so entropy stays defined.
    """
    if not tokens:
        return np.full(topic_count, 1.0 / topic_count)
    counts = np.zeros(topic_count)
    for token in tokens:
        counts[zlib.crc32(token.encode("utf-8")) % topic_count] += 1.0
    return counts / counts.sum()


def topic_entropy(distribution: np.ndarray) -> float:
    p = distribution[distribution > 0]
    return float(-(p * np.log(p)).sum())


def topic_log_energy(distribution: np.ndarray) -> float:
    return float(np.log(distribution * distribution + _LOG_ENERGY_EPS).sum())


def user_features(
    corpus: Corpus,
    graph: DirectedGraph,
    irr: InfluenceCounts,
    lexicons: LexiconSet | None = None,
    topics: Mapping[str, np.ndarray] | None = None,
    topic_count: int = DEFAULT_TOPIC_COUNT,
) -> dict[str, UserFeatures]:
    """Feature vectors for every corpus user.

    ``topics`` maps post_id to a probability vector; when omitted, the
    hashing fallback is used.  When provided it must cover every post.
    """
    lexicons = lexicons or default_lexicons()
    users = sorted(corpus.users)

    contribution = _contribution_features(corpus, users)
    semantic = _semantic_features(corpus, users, lexicons, topics, topic_count)

    degree_map = degrees(graph)
    between = betweenness(graph)
    ranks = pagerank(graph)

    out = {}
    for user in users:
        network = (
            float(degree_map[user][0]),
            float(degree_map[user][1]),
            between[user],
            ranks[user],
        )
        values = (
            contribution[user]
            + network
            + semantic[user]
            + (float(irr.counts.get(user, 0)),)
        )
        out[user] = UserFeatures(user_id=user, values=values)
    return out


def _contribution_features(
    corpus: Corpus, users: list[str]
) -> dict[str, tuple[float, ...]]:
    initial_posts = {u: 0 for u in users}
    replies_to_others = {u: 0 for u in users}
    threads_touched = {u: set() for u in users}
    posts_after_mine = {u: 0 for u in users}
    response_delays: dict[str, list[float]] = {u: [] for u in users}
    byte_sizes: dict[str, list[int]] = {u: [] for u in users}
    day_sets: dict[str, set[int]] = {u: set() for u in users}
    post_totals = {u: 0 for u in users}

    max_delay_minutes = 0.0
    for thread in corpus.threads:
        posts = thread.posts
        n = len(posts)
        first_index: dict[str, int] = {}
        own_counts: dict[str, int] = {}
        for i, post in enumerate(posts):
            u = post.user_id
            first_index.setdefault(u, i)
            own_counts[u] = own_counts.get(u, 0) + 1
            post_totals[u] += 1
            threads_touched[u].add(thread.thread_id)
            byte_sizes[u].append(len(post.body.encode("utf-8")))
            day_sets[u].add(post.timestamp // _SECONDS_PER_DAY)
            if i == 0:
                initial_posts[u] += 1
            elif u != thread.originator:
                replies_to_others[u] += 1
            # Delay until the next post by someone else in this thread.
            for later in posts[i + 1 :]:
                if later.user_id != u:
                    delay = (later.timestamp - post.timestamp) / 60.0
                    response_delays[u].append(delay)
                    max_delay_minutes = max(max_delay_minutes, delay)
                    break
        for u, start in first_index.items():
            # Posts after the user's first one, minus their own later posts.
            posts_after_mine[u] += (n - start - 1) - (own_counts[u] - 1)

    out = {}
    for u in users:
        sizes = sorted(byte_sizes[u], reverse=True)
        total_bytes = float(sum(sizes))
        n_posts = post_totals[u]
        days = day_sets[u]
        active_days = len(days)
        span_days = max(days) - min(days)
        delays = response_delays[u]
        avg_delay = float(np.mean(delays)) if delays else max_delay_minutes
        out[u] = (
            float(initial_posts[u]),
            float(replies_to_others[u]),
            float(len(threads_touched[u])),
            float(posts_after_mine[u]),
            avg_delay,
            total_bytes,
            total_bytes / n_posts,
            float(np.mean(sizes[:_TOP_POSTS])),
            float(active_days),
            float(span_days),
            n_posts / active_days,
            n_posts / (span_days + 1),
        )
    return out


def _semantic_features(
    corpus: Corpus,
    users: list[str],
    lexicons: LexiconSet,
    topics: Mapping[str, np.ndarray] | None,
    topic_count: int,
) -> dict[str, tuple[float, ...]]:
    ratios: dict[str, list[tuple[float, float, float, float]]] = {u: [] for u in users}
    pos_totals = {u: 0 for u in users}
    neg_totals = {u: 0 for u in users}
    topic_sums: dict[str, np.ndarray | None] = {u: None for u in users}
    topic_counts = {u: 0 for u in users}

    for post in corpus.iter_posts():
        u = post.user_id
        scanned = scan_tokens(post.body, lexicons)
        tokens = [t for t, _ in scanned]
        bangs = [b for _, b in scanned]
        n = len(tokens)
        pos = sum(1 for t in tokens if t in lexicons.positive_hits)
        neg = sum(1 for t in tokens if t in lexicons.negative_hits)
        slangy = sum(
            1
            for t in tokens
            if t in lexicons.slang_terms
            or t in lexicons.positive_emoticons
            or t in lexicons.negative_emoticons
        )
        # "Strong" emotion means a hit emphasized past the plain score of 2
        # (boosted, or stacked exclamation marks).
        strong = sum(
            1 for _, _, _, s in hit_strengths(tokens, lexicons, bangs) if s >= 3.0
        )
        pos_totals[u] += pos
        neg_totals[u] += neg
        if n:
            ratios[u].append((pos / n, neg / n, slangy / n, strong / n))
        else:
            ratios[u].append((0.0, 0.0, 0.0, 0.0))

        if topics is not None:
            if post.post_id not in topics:
                raise ValueError(f"topic distribution missing for post {post.post_id!r}")
            dist = np.asarray(topics[post.post_id], dtype=float)
        else:
            dist = fallback_topics(tokens, topic_count)
        prior = topic_sums[u]
        topic_sums[u] = dist.copy() if prior is None else prior + dist
        topic_counts[u] += 1

    out = {}
    for u in users:
        rows = np.array(ratios[u])
        mean_dist = topic_sums[u] / topic_counts[u]
        out[u] = (
            float(rows[:, 0].mean()),
            float(rows[:, 1].mean()),
            float(rows[:, 2].mean()),
            float(rows[:, 3].mean()),
            (pos_totals[u] + 1) / (neg_totals[u] + 1),
            topic_entropy(mean_dist),
            topic_log_energy(mean_dist),
        )
    return out


def feature_matrix(
    features: Mapping[str, UserFeatures],
    names: Sequence[str] | None = None,
) -> tuple[list[str], np.ndarray, tuple[str, ...]]:
    """(sorted users, matrix, column names); columns default to all features."""
    names = tuple(names) if names is not None else USER_FEATURE_NAMES
    missing = [n for n in names if n not in USER_FEATURE_NAMES]
    if missing:
        raise ValueError(f"unknown feature name(s): {missing}")
    cols = [USER_FEATURE_NAMES.index(n) for n in names]
    users = sorted(features)
    X = np.array([[features[u].values[c] for c in cols] for u in users], dtype=float)
    return users, X, names


def augment_with_clusters(
    features: Mapping[str, UserFeatures],
    clusters: Mapping[str, str],
    names: Sequence[str] | None = None,
) -> tuple[list[str], np.ndarray, tuple[str, ...]]:
    """Append cluster-mean columns to each member's vector.

    Every user needs a cluster id.  The produced columns are the selected
    base features followed by their within-cluster means.
    """
    users, X, used = feature_matrix(features, names)
    missing = [u for u in users if u not in clusters]
    if missing:
        raise ValueError(f"users missing a cluster id: {missing[:5]}")
    cluster_ids = [clusters[u] for u in users]
    means = {}
    for cid in sorted(set(cluster_ids)):
        mask = np.array([c == cid for c in cluster_ids])
        means[cid] = X[mask].mean(axis=0)
    extra = np.stack([means[c] for c in cluster_ids])
    names_out = used + tuple(f"cluster_mean_{n}" for n in used)
    return users, np.hstack([X, extra]), names_out


def write_feature_table(
    features: Mapping[str, UserFeatures], path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["user_id", *USER_FEATURE_NAMES])
        for user in sorted(features):
            row = features[user]
            writer.writerow([user, *(f"{v:.6g}" for v in row.values)])
