"""Classifier training wrapper, serialization, CV, and ROC statistics."""

import numpy as np
import pytest

from threadinfluence.sentiment.evaluate import (
    cross_validate,
    midranks,
    roc_area,
    stratified_folds,
)
from threadinfluence.sentiment.models import (
    MODEL_KINDS,
    TrainConfig,
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
    train_classifier,
)


def make_pairs(n=60, seed=0, noise=0.6):
    # 13-dim rows mimicking the feature layout; class shifts three columns
    rng = np.random.default_rng(seed)
    X = rng.normal(0, noise, size=(n, 13))
    y = np.array([0] * (n // 2) + [1] * (n // 2))
    X[y == 1, 1] += 1.0   # pos ratio
    X[y == 0, 2] += 1.0   # neg ratio
    X[y == 1, 7] += 1.5   # pos_vs_neg
    return list(zip(X, y))


def trapezoid_auc(labels, scores):
    # independent re-derivation: sweep thresholds, integrate TPR over FPR
    labels = np.asarray(labels)
    scores = np.asarray(scores)
    order = np.argsort(-scores, kind="stable")
    labels = labels[order]
    scores = scores[order]
    tps = np.cumsum(labels == 1)
    fps = np.cumsum(labels == 0)
    # keep only the last point of each tied-score run
    keep = np.append(scores[1:] != scores[:-1], True)
    tpr = np.concatenate([[0], tps[keep] / tps[-1]])
    fpr = np.concatenate([[0], fps[keep] / fps[-1]])
    return float(np.trapezoid(tpr, fpr))


@pytest.mark.parametrize("kind", MODEL_KINDS)
def test_each_kind_learns_separable_data(kind):
    pairs = make_pairs()
    model = train_classifier(pairs, TrainConfig(kind=kind))
    X = np.array([x for x, _ in pairs])
    y = np.array([c for _, c in pairs])
    acc = ((model.predict_proba(X) > 0.5).astype(int) == y).mean()
    assert acc >= 0.85


@pytest.mark.parametrize("kind", MODEL_KINDS)
def test_save_load_round_trip(tmp_path, kind):
    pairs = make_pairs(seed=1)
    model = train_classifier(pairs, TrainConfig(kind=kind))
    path = tmp_path / "model.json"
    save_model(model, path)
    clone = load_model(path)
    X = np.array([x for x, _ in pairs])
    assert np.allclose(model.predict_proba(X), clone.predict_proba(X))
    assert clone.kind == kind


def test_string_labels_accepted():
    pairs = [(x, "pos" if c == 1 else "neg") for x, c in make_pairs(seed=2)]
    model = train_classifier(pairs, TrainConfig(kind="logistic"))
    assert model.kind == "logistic"


def test_single_class_rejected():
    pairs = [(x, 1) for x, _ in make_pairs()]
    with pytest.raises(ValueError):
        train_classifier(pairs)


def test_non_finite_features_rejected():
    pairs = make_pairs()
    bad = np.array(pairs[0][0])
    bad[3] = np.nan
    pairs[0] = (bad, pairs[0][1])
    with pytest.raises(ValueError):
        train_classifier(pairs)


def test_feature_subset_restricts_input():
    pairs = make_pairs(seed=3)
    model = train_classifier(pairs, TrainConfig(kind="logistic", feature_subset=(1, 2, 7)))
    X = np.array([x for x, _ in pairs])
    y = np.array([c for _, c in pairs])
    acc = ((model.predict_proba(X) > 0.5).astype(int) == y).mean()
    assert acc >= 0.85
    assert model.feature_subset == (1, 2, 7)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        TrainConfig(kind="boosted-ferns")


def test_model_dict_rejects_foreign_payload():
    with pytest.raises(ValueError):
        model_from_dict({"format": "something-else"})
    pairs = make_pairs(seed=4)
    payload = model_to_dict(train_classifier(pairs))
    payload["version"] = 99
    with pytest.raises(ValueError):
        model_from_dict(payload)


def test_midranks_average_ties():
    values = np.array([10.0, 20.0, 20.0, 30.0])
    assert np.array_equal(midranks(values), np.array([1.0, 2.5, 2.5, 4.0]))


def test_roc_area_matches_trapezoid_on_random_sets():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(4, 60))
        labels = rng.integers(0, 2, n)
        if labels.sum() in (0, n):
            labels[0] = 1 - labels[0]
        # coarse grid forces plenty of ties
        scores = np.round(rng.random(n), 1)
        assert roc_area(labels, scores) == pytest.approx(
            trapezoid_auc(labels, scores), abs=1e-9
        )


def test_roc_area_perfect_and_reversed():
    labels = [0, 0, 1, 1]
    assert roc_area(labels, [0.1, 0.2, 0.8, 0.9]) == 1.0
    assert roc_area(labels, [0.9, 0.8, 0.2, 0.1]) == 0.0
    assert roc_area(labels, [0.5, 0.5, 0.5, 0.5]) == 0.5


def test_roc_area_single_class_rejected():
    with pytest.raises(ValueError):
        roc_area([1, 1, 1], [0.1, 0.2, 0.3])


def test_stratified_folds_partition_and_balance():
    labels = np.array([0] * 30 + [1] * 10)
    folds = stratified_folds(labels, 5, seed=3)
    all_idx = np.sort(np.concatenate(folds))
    assert np.array_equal(all_idx, np.arange(40))
    for fold in folds:
        assert labels[fold].sum() == 2  # 10 positives over 5 folds


def test_stratified_folds_bad_k():
    labels = np.array([0, 1, 0, 1])
    with pytest.raises(ValueError):
        stratified_folds(labels, 1, seed=0)
    with pytest.raises(ValueError):
        stratified_folds(labels, 9, seed=0)


def test_cross_validate_beats_chance_on_signal():
    metrics = cross_validate(make_pairs(n=120, seed=5), k=5)
    assert metrics.accuracy >= 0.8
    assert metrics.roc_area >= 0.85
    assert len(metrics.per_fold) == 5
    assert np.isfinite(metrics.posteriors).all()


def test_cross_validate_near_chance_on_permuted_labels():
    rng = np.random.default_rng(6)
    pairs = make_pairs(n=120, seed=6)
    ys = np.array([c for _, c in pairs])
    rng.shuffle(ys)
    shuffled = [(x, c) for (x, _), c in zip(pairs, ys)]
    metrics = cross_validate(shuffled, k=5)
    assert 0.3 <= metrics.accuracy <= 0.7
