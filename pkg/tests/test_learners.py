"""From-scratch learners: stumps, boosting, logistic, trees, NB, forests."""

import numpy as np
import pytest

from threadinfluence.learners import (
    AdaBoostStumps,
    DecisionTree,
    GaussianNB,
    LogisticModel,
    RandomForest,
    stable_sigmoid,
)


def separable(n=80, seed=0, gap=2.0):
    rng = np.random.default_rng(seed)
    X0 = rng.normal(-gap / 2, 1.0, size=(n // 2, 3))
    X1 = rng.normal(gap / 2, 1.0, size=(n // 2, 3))
    X = np.vstack([X0, X1])
    y = np.array([0.0] * (n // 2) + [1.0] * (n // 2))
    return X, y


def test_stable_sigmoid_extremes():
    assert stable_sigmoid(np.array([800.0]))[0] == pytest.approx(1.0)
    assert stable_sigmoid(np.array([-800.0]))[0] == pytest.approx(0.0)
    assert stable_sigmoid(np.array([0.0]))[0] == pytest.approx(0.5)


def test_adaboost_separates_and_is_deterministic():
    X, y = separable()
    a = AdaBoostStumps().fit(X, y, rounds=25)
    b = AdaBoostStumps().fit(X, y, rounds=25)
    pa = a.predict_proba(X)
    assert ((pa > 0.5) == y.astype(bool)).mean() >= 0.95
    assert np.array_equal(pa, b.predict_proba(X))


def test_adaboost_single_stump_threshold():
    # one feature, clean split at 0
    X = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    y = np.array([0.0, 0.0, 1.0, 1.0])
    model = AdaBoostStumps().fit(X, y, rounds=1)
    p = model.predict_proba(X)
    assert (p[:2] < 0.5).all()
    assert (p[2:] > 0.5).all()


def test_adaboost_round_trip_serialization():
    X, y = separable(seed=3)
    model = AdaBoostStumps().fit(X, y, rounds=10)
    clone = AdaBoostStumps.from_dict(model.to_dict())
    assert np.array_equal(model.predict_proba(X), clone.predict_proba(X))


def test_logistic_learns_affine_boundary():
    X, y = separable(seed=1, gap=3.0)
    model = LogisticModel().fit(X, y)
    acc = ((model.predict_proba(X) > 0.5) == y.astype(bool)).mean()
    assert acc >= 0.95


def test_logistic_round_trip_serialization():
    X, y = separable(seed=2)
    model = LogisticModel().fit(X, y)
    clone = LogisticModel.from_dict(model.to_dict())
    assert np.allclose(model.predict_proba(X), clone.predict_proba(X))


def test_tree_fits_conjunction_at_depth_two():
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    y = np.array([0.0, 0.0, 0.0, 1.0])  # x0 AND x1
    tree = DecisionTree().fit(X, y, max_depth=2)
    assert np.array_equal((tree.predict_proba(X) > 0.5).astype(float), y)


def test_tree_requires_positive_gain():
    # no single xor split reduces Gini, so the greedy tree stays a leaf
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    y = np.array([0.0, 1.0, 1.0, 0.0])
    tree = DecisionTree().fit(X, y, max_depth=5)
    assert np.array_equal(tree.predict_proba(X), np.full(4, 0.5))


def test_tree_round_trip_serialization():
    X, y = separable(seed=4)
    tree = DecisionTree().fit(X, y, max_depth=4)
    clone = DecisionTree.from_dict(tree.to_dict())
    assert np.array_equal(tree.predict_proba(X), clone.predict_proba(X))


def test_gaussian_nb_recovers_shifted_classes():
    X, y = separable(seed=5, gap=3.0)
    nb = GaussianNB().fit(X, y)
    acc = ((nb.predict_proba(X) > 0.5) == y.astype(bool)).mean()
    assert acc >= 0.95


def test_gaussian_nb_probabilities_are_probabilities():
    X, y = separable(seed=6)
    p = GaussianNB().fit(X, y).predict_proba(X)
    assert ((p >= 0) & (p <= 1)).all()


def test_random_forest_seeded_determinism():
    X, y = separable(seed=7)
    a = RandomForest(n_trees=20, seed=11).fit(X, y).predict_proba(X)
    b = RandomForest(n_trees=20, seed=11).fit(X, y).predict_proba(X)
    c = RandomForest(n_trees=20, seed=12).fit(X, y).predict_proba(X)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_random_forest_handles_skewed_labels():
    # bootstrap resamples of a 1-in-20 minority often contain one class
    rng = np.random.default_rng(8)
    X = rng.normal(size=(40, 4))
    y = np.zeros(40)
    y[:2] = 1.0
    X[:2] += 4.0
    forest = RandomForest(n_trees=30, seed=0).fit(X, y)
    p = forest.predict_proba(X)
    assert ((p >= 0) & (p <= 1)).all()
    assert p[:2].mean() > p[2:].mean()


def test_random_forest_beats_chance():
    X, y = separable(n=120, seed=9, gap=2.5)
    forest = RandomForest(n_trees=40, seed=1).fit(X, y)
    acc = ((forest.predict_proba(X) > 0.5) == y.astype(bool)).mean()
    assert acc >= 0.9
