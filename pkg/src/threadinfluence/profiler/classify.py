"""Influential-user classifiers over per-user feature vectors.

Base models (naive Bayes, logistic regression, random forest) train on the
contribution/network/semantic features; the ensemble is a random forest
stacked on the base models' out-of-fold probabilities, optionally with the
per-user IRR count as one more input.  All cross-validation predictions
are out-of-fold, so evaluation never sees a model scored on its own
training rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from threadinfluence.learners import GaussianNB, LogisticModel, RandomForest
from threadinfluence.profiler.features import (
    USER_FEATURE_NAMES,
    UserFeatures,
    feature_matrix,
)
from threadinfluence.sentiment.evaluate import stratified_folds

IU_MODEL_KINDS = ("naive-bayes", "logistic", "random-forest")

# Base models replicate the pre-influence profile: every feature except the
# IRR count, which only the extended ensemble sees.
BASE_FEATURE_NAMES: tuple[str, ...] = tuple(
    n for n in USER_FEATURE_NAMES if n != "irr_count"
)


@dataclass(frozen=True)
class IuLabelSet:
    """Ground-truth influential users, with a provenance tag for reports."""

    influential: frozenset[str]
    provenance: str = ""

    def __post_init__(self) -> None:
        if not self.influential:
            raise ValueError("label set is empty")

    def merge(self, other: "IuLabelSet") -> "IuLabelSet":
        tag = " + ".join(t for t in (self.provenance, other.provenance) if t)
        return IuLabelSet(self.influential | other.influential, tag)


def load_label_file(path: str | Path, provenance: str = "") -> IuLabelSet:
    """One user_id per line; '#' starts a comment."""
    users = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            user = line.split("#", 1)[0].strip()
            if user:
                users.add(user)
    return IuLabelSet(frozenset(users), provenance or str(path))


def write_label_file(labels: IuLabelSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for user in sorted(labels.influential):
            handle.write(user + "\n")


@dataclass
class IuResult:
    """A fitted influential-user model plus its out-of-fold predictions."""

    kind: str
    users: tuple[str, ...]
    cv_probs: dict[str, float]
    feature_names: tuple[str, ...]
    model: object

    def probability_map(self) -> dict[str, float]:
        return dict(self.cv_probs)


def _fit_learner(kind: str, X: np.ndarray, y: np.ndarray, seed: int):
    if kind == "naive-bayes":
        return GaussianNB().fit(X, y)
    if kind == "logistic":
        return LogisticModel().fit(X, y)
    if kind == "random-forest":
        return RandomForest(n_trees=100, seed=seed).fit(X, y)
    raise ValueError(f"unknown influential-user model kind {kind!r}; expected {IU_MODEL_KINDS}")


def _cv_probabilities(
    X: np.ndarray, y: np.ndarray, kind: str, folds: int, seed: int
) -> np.ndarray:
    fold_indices = stratified_folds(y.astype(int), folds, seed=seed)
    probs = np.full(len(y), np.nan)
    for fold_no, test_idx in enumerate(fold_indices):
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        model = _fit_learner(kind, X[mask], y[mask], seed + 1 + fold_no)
        probs[test_idx] = model.predict_proba(X[test_idx])
    return probs


def train_iu_base(
    features: Mapping[str, UserFeatures],
    labels: IuLabelSet,
    kind: str = "random-forest",
    folds: int = 5,
    seed: int = 0,
    feature_names: Sequence[str] | None = None,
) -> IuResult:
    """Train one base model and collect its out-of-fold probabilities.

    ``feature_names`` defaults to every feature except the IRR count.
    """
    names = tuple(feature_names) if feature_names is not None else BASE_FEATURE_NAMES
    users, X, used = feature_matrix(features, names)
    y = np.array([1.0 if u in labels.influential else 0.0 for u in users])
    if y.sum() == 0 or y.sum() == len(y):
        raise ValueError("labels must mark some but not all users as influential")

    probs = _cv_probabilities(X, y, kind, folds, seed)
    model = _fit_learner(kind, X, y, seed)
    return IuResult(
        kind=kind,
        users=tuple(users),
        cv_probs={u: float(p) for u, p in zip(users, probs)},
        feature_names=used,
        model=model,
    )


def train_iu_ensemble(
    base_outputs: Sequence[Mapping[str, float]],
    labels: IuLabelSet,
    irr: Mapping[str, int] | None = None,
    folds: int = 5,
    seed: int = 0,
    n_trees: int = 100,
) -> IuResult:
    """Random-forest ensemble over base-model probabilities.

    ``base_outputs`` holds one user->probability map per base model; all
    maps must cover the same users.  Passing ``irr`` adds the per-user IRR
    count as an extra ensemble input.
    """
    if len(base_outputs) < 2:
        raise ValueError("ensemble needs at least two base models")
    users = sorted(base_outputs[0])
    for i, output in enumerate(base_outputs[1:], start=2):
        if sorted(output) != users:
            raise ValueError(f"base model {i} covers a different user set")
    if irr is not None:
        missing = [u for u in users if u not in irr]
        if missing:
            raise ValueError(f"irr counts missing users: {missing[:5]}")

    columns = [np.array([out[u] for u in users]) for out in base_outputs]
    names = [f"base_{i}" for i in range(len(base_outputs))]
    if irr is not None:
        columns.append(np.array([float(irr[u]) for u in users]))
        names.append("irr_count")
    X = np.column_stack(columns)
    y = np.array([1.0 if u in labels.influential else 0.0 for u in users])
    if y.sum() == 0 or y.sum() == len(y):
        raise ValueError("labels must mark some but not all users as influential")

    fold_indices = stratified_folds(y.astype(int), folds, seed=seed)
    probs = np.full(len(y), np.nan)
    for fold_no, test_idx in enumerate(fold_indices):
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        forest = RandomForest(n_trees=n_trees, seed=seed + 1 + fold_no).fit(X[mask], y[mask])
        probs[test_idx] = forest.predict_proba(X[test_idx])
    model = RandomForest(n_trees=n_trees, seed=seed).fit(X, y)
    return IuResult(
        kind="random-forest-ensemble",
        users=tuple(users),
        cv_probs={u: float(p) for u, p in zip(users, probs)},
        feature_names=tuple(names),
        model=model,
    )
