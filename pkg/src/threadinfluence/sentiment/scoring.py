"""Scoring a corpus with a trained sentiment model.

A post is labeled positive iff its posterior strictly exceeds the
threshold; everything else (including exact equality) is negative.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from threadinfluence.corpus import Corpus
from threadinfluence.sentiment.features import extract_features
from threadinfluence.sentiment.lexicons import LexiconSet
from threadinfluence.sentiment.models import SentimentModel

import numpy as np


@dataclass(frozen=True)
class PostScore:
    post_id: str
    posterior: float
    label: str  # "positive" | "negative"


def label_for(posterior: float, threshold: float = 0.5) -> str:
    return "positive" if posterior > threshold else "negative"


def score_posts(
    corpus: Corpus,
    model: SentimentModel,
    lexicons: LexiconSet,
    threshold: float = 0.5,
) -> dict[str, PostScore]:
    """Posterior and label for every post, keyed by post_id."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1); got {threshold}")
    post_ids = []
    rows = []
    for post in corpus.iter_posts():
        post_ids.append(post.post_id)
        rows.append(extract_features(post, lexicons).as_array())
    if not rows:
        return {}
    posteriors = model.predict_proba(np.stack(rows))
    return {
        post_id: PostScore(post_id, float(p), label_for(float(p), threshold))
        for post_id, p in zip(post_ids, posteriors)
    }


def write_scores(scores: dict[str, PostScore], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["post_id", "posterior", "label"])
        for post_id in sorted(scores):
            score = scores[post_id]
            writer.writerow([post_id, f"{score.posterior:.6g}", score.label])


def read_scores(path: str | Path) -> dict[str, PostScore]:
    scores = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            score = PostScore(
                post_id=row["post_id"],
                posterior=float(row["posterior"]),
                label=row["label"],
            )
            scores[score.post_id] = score
    return scores
