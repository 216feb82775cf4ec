"""Post-sentiment classifiers: boosted stumps, logistic regression, CART.

Models are persisted as versioned JSON so a scoring run can be reproduced
exactly from the file alone (kind, parameters, feature subset, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from threadinfluence.learners import AdaBoostStumps, DecisionTree, LogisticModel
from threadinfluence.sentiment.features import FEATURE_NAMES, FeatureVector

MODEL_KINDS = ("adaboost-stumps", "logistic", "decision-tree")

_FORMAT = "sentiment-model"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    kind: str = "adaboost-stumps"
    rounds: int = 60              # boosting rounds
    max_depth: int = 4            # decision-tree depth limit
    learning_rate: float = 0.5    # logistic gradient step
    tolerance: float = 1e-6       # logistic gradient-norm stop
    max_iter: int = 5000
    l2: float = 1e-4
    seed: int = 0
    feature_subset: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        if self.feature_subset is not None:
            bad = [i for i in self.feature_subset if not 0 <= i < len(FEATURE_NAMES)]
            if bad:
                raise ValueError(f"feature_subset indices out of range: {bad}")
            if len(set(self.feature_subset)) != len(self.feature_subset):
                raise ValueError("feature_subset contains duplicates")


@dataclass
class SentimentModel:
    """A trained classifier mapping 13-feature rows to posteriors in [0, 1]."""

    kind: str
    feature_subset: tuple[int, ...]
    training_meta: dict[str, Any]
    impl: Any = field(repr=False)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(FEATURE_NAMES):
            raise ValueError(f"expected an (n, {len(FEATURE_NAMES)}) feature matrix")
        return self.impl.predict_proba(X[:, self.feature_subset])

    def score_vector(self, features: FeatureVector) -> float:
        return float(self.predict_proba(features.as_array()[None, :])[0])

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(FEATURE_NAMES[i] for i in self.feature_subset)


def _as_matrix(
    labeled: Iterable[tuple[FeatureVector | Sequence[float], Any]]
) -> tuple[np.ndarray, np.ndarray]:
    rows = []
    labels = []
    for features, label in labeled:
        if isinstance(features, FeatureVector):
            rows.append(features.as_array())
        else:
            rows.append(np.asarray(features, dtype=float))
        labels.append(_as_label(label))
    if not rows:
        raise ValueError("empty training set")
    return np.stack(rows), np.asarray(labels, dtype=float)


def _as_label(label: Any) -> int:
    if isinstance(label, str):
        if label in ("pos", "positive"):
            return 1
        if label in ("neg", "negative"):
            return 0
        raise ValueError(f"unknown class label {label!r}")
    return int(bool(label))


def train_classifier(
    labeled: Iterable[tuple[FeatureVector | Sequence[float], Any]],
    config: TrainConfig | None = None,
) -> SentimentModel:
    """Fit a sentiment classifier on (features, class) pairs.

    Classes may be 0/1 ints or pos/neg strings.  Raises ValueError on a
    single-class training set or non-finite feature values.
    """
    config = config or TrainConfig()
    X, y = _as_matrix(labeled)
    subset = config.feature_subset or tuple(range(X.shape[1]))
    Xs = X[:, subset]
    if not np.isfinite(Xs).all():
        raise ValueError("training features contain non-finite values")
    if np.unique(y).size < 2:
        raise ValueError("single-class training set")

    if config.kind == "adaboost-stumps":
        impl = AdaBoostStumps().fit(Xs, y, rounds=config.rounds)
    elif config.kind == "logistic":
        impl = LogisticModel().fit(
            Xs,
            y,
            learning_rate=config.learning_rate,
            tolerance=config.tolerance,
            max_iter=config.max_iter,
            l2=config.l2,
        )
    else:
        impl = DecisionTree().fit(Xs, y, max_depth=config.max_depth)

    meta = {"seed": config.seed, "rounds": config.rounds, "folds": None}
    return SentimentModel(
        kind=config.kind, feature_subset=tuple(subset), training_meta=meta, impl=impl
    )


def model_to_dict(model: SentimentModel) -> dict[str, Any]:
    return {
        "format": _FORMAT,
        "version": _FORMAT_VERSION,
        "kind": model.kind,
        "feature_subset": list(model.feature_subset),
        "feature_names": list(model.feature_names),
        "training_meta": model.training_meta,
        "params": model.impl.to_dict(),
    }


def model_from_dict(payload: dict[str, Any]) -> SentimentModel:
    if payload.get("format") != _FORMAT:
        raise ValueError("not a sentiment model file")
    if payload.get("version") != _FORMAT_VERSION:
        raise ValueError(f"unsupported sentiment model version {payload.get('version')!r}")
    kind = payload["kind"]
    impl_cls = {
        "adaboost-stumps": AdaBoostStumps,
        "logistic": LogisticModel,
        "decision-tree": DecisionTree,
    }.get(kind)
    if impl_cls is None:
        raise ValueError(f"unknown model kind {kind!r}")
    return SentimentModel(
        kind=kind,
        feature_subset=tuple(int(i) for i in payload["feature_subset"]),
        training_meta=dict(payload.get("training_meta", {})),
        impl=impl_cls.from_dict(payload["params"]),
    )


def save_model(model: SentimentModel, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model_to_dict(model), handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_model(path: str | Path) -> SentimentModel:
    with open(path, encoding="utf-8") as handle:
        return model_from_dict(json.load(handle))
