"""Cross-validation, ROC area, and feature-subset search for sentiment models."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable, Sequence

import numpy as np

from threadinfluence.sentiment.features import FEATURE_NAMES
from threadinfluence.sentiment.models import (
    SentimentModel,
    TrainConfig,
    _as_matrix,
    train_classifier,
)


@dataclass(frozen=True)
class FoldMetrics:
    fold: int
    accuracy: float
    roc_area: float


@dataclass(frozen=True)
class CvMetrics:
    """Pooled out-of-fold metrics plus the per-fold breakdown."""

    accuracy: float
    roc_area: float
    per_fold: tuple[FoldMetrics, ...]
    posteriors: np.ndarray  # out-of-fold posterior per input row


def midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def roc_area(labels: Sequence[int], scores: Sequence[float]) -> float:
    """ROC area via the rank-sum statistic (tie-aware, threshold-free)."""
    y = np.asarray(labels, dtype=int)
    s = np.asarray(scores, dtype=float)
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_area requires both classes present")
    ranks = midranks(s)
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def stratified_folds(
    labels: Sequence[int], k: int, seed: int = 0
) -> list[np.ndarray]:
    """Seeded stratified split: shuffle within class, deal round-robin."""
    y = np.asarray(labels, dtype=int)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if len(y) < k:
        raise ValueError(f"fewer examples ({len(y)}) than folds ({k})")
    rng = np.random.Generator(np.random.PCG64(seed))
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in (0, 1):
        idx = np.nonzero(y == cls)[0]
        rng.shuffle(idx)
        for i, example in enumerate(idx):
            folds[i % k].append(int(example))
    return [np.array(sorted(f), dtype=int) for f in folds]


def cross_validate(
    labeled: Iterable[tuple[Any, Any]],
    k: int = 10,
    config: TrainConfig | None = None,
) -> CvMetrics:
    """Stratified k-fold CV; accuracy at threshold 0.5, ROC by rank statistic.

    Pooled metrics are computed over all out-of-fold posteriors; a fold
    containing one class reports NaN roc_area for that fold only.
    """
    config = config or TrainConfig()
    X, y = _as_matrix(labeled)
    folds = stratified_folds(y.astype(int), k, seed=config.seed)
    posteriors = np.full(len(y), np.nan)
    per_fold = []
    for fold_no, test_idx in enumerate(folds):
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        model = train_classifier(list(zip(X[mask], y[mask])), config)
        p = model.predict_proba(X[test_idx])
        posteriors[test_idx] = p
        pred = (p > 0.5).astype(int)
        accuracy = float((pred == y[test_idx].astype(int)).mean())
        fold_y = y[test_idx].astype(int)
        if 0 < fold_y.sum() < len(fold_y):
            fold_roc = roc_area(fold_y, p)
        else:
            fold_roc = float("nan")
        per_fold.append(FoldMetrics(fold=fold_no, accuracy=accuracy, roc_area=fold_roc))

    pred = (posteriors > 0.5).astype(int)
    accuracy = float((pred == y.astype(int)).mean())
    pooled_roc = roc_area(y.astype(int), posteriors)
    return CvMetrics(
        accuracy=accuracy,
        roc_area=pooled_roc,
        per_fold=tuple(per_fold),
        posteriors=posteriors,
    )


def _subset_score(
    X: np.ndarray, y: np.ndarray, subset: tuple[int, ...], k: int, config: TrainConfig
) -> float:
    trial = TrainConfig(
        kind=config.kind,
        rounds=config.rounds,
        max_depth=config.max_depth,
        learning_rate=config.learning_rate,
        tolerance=config.tolerance,
        max_iter=config.max_iter,
        l2=config.l2,
        seed=config.seed,
        feature_subset=subset,
    )
    return cross_validate(list(zip(X, y)), k, trial).roc_area


def forward_select_features(
    labeled: Iterable[tuple[Any, Any]],
    config: TrainConfig | None = None,
    k: int = 5,
) -> tuple[tuple[int, ...], list[tuple[tuple[int, ...], float]]]:
    """Greedy forward selection maximizing CV ROC area.

    Returns the chosen feature-index subset and the (subset, score) history.
    Ties prefer the lower feature index, keeping runs reproducible.
    """
    config = config or TrainConfig()
    X, y = _as_matrix(labeled)
    remaining = list(range(X.shape[1]))
    chosen: list[int] = []
    best_score = -np.inf
    history: list[tuple[tuple[int, ...], float]] = []
    while remaining:
        round_best: tuple[float, int] | None = None
        for j in remaining:
            subset = tuple(sorted(chosen + [j]))
            score = _subset_score(X, y, subset, k, config)
            if round_best is None or score > round_best[0] + 1e-12:
                round_best = (score, j)
        assert round_best is not None
        score, j = round_best
        if score <= best_score + 1e-12:
            break
        chosen.append(j)
        remaining.remove(j)
        best_score = score
        history.append((tuple(sorted(chosen)), score))
    return tuple(sorted(chosen)), history


def exhaustive_select_features(
    labeled: Iterable[tuple[Any, Any]],
    config: TrainConfig | None = None,
    k: int = 5,
    max_features: int | None = None,
) -> tuple[tuple[int, ...], float]:
    """Search every non-empty feature subset; feasible only for small d."""
    config = config or TrainConfig()
    X, y = _as_matrix(labeled)
    d = X.shape[1]
    if d > len(FEATURE_NAMES):
        raise ValueError("exhaustive search supports at most the full feature set")
    best: tuple[float, tuple[int, ...]] | None = None
    sizes = range(1, (max_features or d) + 1)
    for size in sizes:
        for subset in combinations(range(d), size):
            score = _subset_score(X, y, subset, k, config)
            if best is None or score > best[0] + 1e-12:
                best = (score, subset)
    assert best is not None
    return best[1], best[0]
