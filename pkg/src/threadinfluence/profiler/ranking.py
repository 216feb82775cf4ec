"""User rankings and top-K evaluation.

Rankings sort by score descending with ties broken by user_id ascending,
so equal scores still order deterministically.  Top-K metrics report the
attainable ceiling alongside each value: recall can reach at most
min(K, |IU|) / |IU| and precision at most min(K, |IU|) / K.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from threadinfluence.corpus import Corpus
from threadinfluence.dynamics import Scores
from threadinfluence.graph import (
    betweenness,
    build_post_reply_graph,
    degrees,
    pagerank,
)
from threadinfluence.influence import early_reply_counts, irr_counts
from threadinfluence.profiler.classify import IuLabelSet

RANKING_METRICS = (
    "threads_initiated",
    "total_posts",
    "in_degree",
    "out_degree",
    "betweenness",
    "pagerank",
    "early_replies_24h",
    "irr_count",
)


@dataclass(frozen=True)
class Ranking:
    source: str
    entries: tuple[tuple[str, float], ...]  # (user_id, score), best first

    @property
    def users(self) -> tuple[str, ...]:
        return tuple(u for u, _ in self.entries)

    def top(self, k: int) -> tuple[str, ...]:
        return self.users[:k]


def rank_users(scores: Mapping[str, float], source: str = "") -> Ranking:
    """Rank all scored users, highest score first, user_id breaking ties."""
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return Ranking(source=source, entries=tuple((u, float(s)) for u, s in ordered))


def compute_metric(
    corpus: Corpus,
    metric: str,
    scores: Scores | None = None,
    threshold: float = 0.5,
    window_hours: float = 24.0,
    restrict_eligible: bool = False,
) -> dict[str, float]:
    """Per-user values for one of the standard ranking metrics."""
    if metric not in RANKING_METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {RANKING_METRICS}")

    if metric == "threads_initiated":
        out = {u: 0.0 for u in corpus.users}
        for thread in corpus.threads:
            out[thread.originator] += 1.0
        return out
    if metric == "total_posts":
        out = {u: 0.0 for u in corpus.users}
        for post in corpus.iter_posts():
            out[post.user_id] += 1.0
        return out
    if metric in ("in_degree", "out_degree"):
        graph = build_post_reply_graph(corpus)
        idx = 0 if metric == "in_degree" else 1
        return {u: float(d[idx]) for u, d in degrees(graph).items()}
    if metric == "betweenness":
        return betweenness(build_post_reply_graph(corpus))
    if metric == "pagerank":
        return pagerank(build_post_reply_graph(corpus))
    if metric == "early_replies_24h":
        counts = early_reply_counts(corpus, window_hours, restrict_eligible)
        return {u: float(c) for u, c in counts.items()}
    # irr_count
    if scores is None:
        raise ValueError("irr_count ranking requires sentiment scores")
    counts = irr_counts(corpus, scores, threshold)
    return {u: float(c) for u, c in counts.counts.items()}


@dataclass(frozen=True)
class TopK:
    k: int
    value: float          # recall or precision
    max_possible: float   # ceiling given K and the label-set size
    hits: int             # |top-K intersect IU|


def topk_recall(ranking: Ranking, labels: IuLabelSet, k: int) -> TopK:
    """|top-K intersect IU| / |IU|, with the attainable ceiling."""
    if k < 0:
        raise ValueError("k must be non-negative")
    influential = labels.influential
    hits = sum(1 for u in ranking.top(k) if u in influential)
    return TopK(
        k=k,
        value=hits / len(influential),
        max_possible=min(k, len(influential)) / len(influential),
        hits=hits,
    )


def topk_precision(ranking: Ranking, labels: IuLabelSet, k: int) -> TopK:
    """|top-K intersect IU| / K, with the attainable ceiling."""
    if k < 1:
        raise ValueError("k must be positive")
    influential = labels.influential
    hits = sum(1 for u in ranking.top(k) if u in influential)
    return TopK(
        k=k,
        value=hits / k,
        max_possible=min(k, len(influential)) / k,
        hits=hits,
    )


def write_ranking(ranking: Ranking, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["rank", "user_id", "score"])
        for position, (user, score) in enumerate(ranking.entries, start=1):
            writer.writerow([position, user, f"{score:.6g}"])


def read_ranking(path: str | Path, source: str = "") -> Ranking:
    entries = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            entries.append((row["user_id"], float(row["score"])))
    return Ranking(source=source or str(path), entries=tuple(entries))
