"""Small, deterministic learners shared by the sentiment and user classifiers.

Everything here is binary classification over dense float matrices.
Implementations are deliberately plain: seeded, single-threaded, with fixed
tie-breaking (lowest feature index, then lowest threshold) so repeated runs
are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np


def stable_sigmoid(z: np.ndarray | float) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _check_training_inputs(
    X: np.ndarray, y: np.ndarray, require_two_classes: bool = True
) -> None:
    if not np.isfinite(X).all():
        raise ValueError("training features contain non-finite values")
    if require_two_classes and np.unique(y).size < 2:
        raise ValueError("single-class training set")


# ---------------------------------------------------------------------------
# Boosted stumps


@dataclass(frozen=True)
class Stump:
    """Depth-1 split: predict ``left`` where x[feature] <= threshold."""

    feature: int
    threshold: float
    left: float
    right: float

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.where(X[:, self.feature] <= self.threshold, self.left, self.right)


def _best_stump(X: np.ndarray, y_pm: np.ndarray, w: np.ndarray) -> tuple[Stump, float] | None:
    """Minimum weighted-error stump; None when no feature admits a cut."""
    best: tuple[float, int, float, float] | None = None  # err, feature, thr, left
    total_pos = float(w[y_pm > 0].sum())
    for j in range(X.shape[1]):
        x = X[:, j]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        cuts = np.nonzero(xs[1:] > xs[:-1])[0]
        if cuts.size == 0:
            continue
        signed = np.cumsum((w * y_pm)[order])
        # err of the stump predicting +1 on the left block, -1 on the right:
        # sum_w(neg, left) + sum_w(pos, right) = total_pos - cum_signed.
        err_plus = total_pos - signed[cuts]
        err = np.minimum(err_plus, 1.0 - err_plus)
        k = int(np.argmin(err))
        if best is None or err[k] < best[0] - 1e-15:
            cut = cuts[k]
            threshold = (xs[cut] + xs[cut + 1]) / 2.0
            left = 1.0 if err_plus[k] <= 1.0 - err_plus[k] else -1.0
            best = (float(err[k]), j, float(threshold), left)
    if best is None:
        return None
    err, feature, threshold, left = best
    return Stump(feature, threshold, left, -left), err


class AdaBoostStumps:
    """Discrete AdaBoost over depth-1 stumps.

    The posterior is the logistic transform of twice the ensemble margin,
    so a confident margin saturates toward 0 or 1.
    """

    def __init__(self) -> None:
        self.stumps: list[Stump] = []
        self.alphas: list[float] = []

    def fit(self, X: np.ndarray, y: np.ndarray, rounds: int) -> "AdaBoostStumps":
        _check_training_inputs(X, y)
        y_pm = np.where(y > 0, 1.0, -1.0)
        w = np.full(len(y), 1.0 / len(y))
        for _ in range(rounds):
            found = _best_stump(X, y_pm, w)
            if found is None:
                break
            stump, err = found
            if err >= 0.5 - 1e-12:
                break
            err = min(max(err, 1e-12), 1.0 - 1e-12)
            alpha = 0.5 * np.log((1.0 - err) / err)
            pred = stump.predict(X)
            w = w * np.exp(-alpha * y_pm * pred)
            w /= w.sum()
            self.stumps.append(stump)
            self.alphas.append(float(alpha))
        return self

    def margin(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(len(X))
        for stump, alpha in zip(self.stumps, self.alphas):
            out += alpha * stump.predict(X)
        return out

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return stable_sigmoid(2.0 * self.margin(X))

    def to_dict(self) -> dict[str, Any]:
        return {
            "stumps": [
                {"feature": s.feature, "threshold": s.threshold, "left": s.left, "right": s.right}
                for s in self.stumps
            ],
            "alphas": self.alphas,
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "AdaBoostStumps":
        model = cls()
        model.stumps = [
            Stump(int(s["feature"]), float(s["threshold"]), float(s["left"]), float(s["right"]))
            for s in payload["stumps"]
        ]
        model.alphas = [float(a) for a in payload["alphas"]]
        return model


# ---------------------------------------------------------------------------
# Logistic regression


class LogisticModel:
    """Full-batch gradient descent on standardized features, to a gradient
    tolerance.  Deterministic: no sampling, fixed initialization at zero."""

    def __init__(self) -> None:
        self.weights = np.zeros(0)
        self.bias = 0.0
        self.mean = np.zeros(0)
        self.scale = np.ones(0)

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        learning_rate: float = 0.5,
        tolerance: float = 1e-6,
        max_iter: int = 5000,
        l2: float = 1e-4,
    ) -> "LogisticModel":
        _check_training_inputs(X, y)
        y = np.asarray(y, dtype=float)
        self.mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0.0] = 1.0
        self.scale = scale
        Xs = (X - self.mean) / self.scale

        w = np.zeros(X.shape[1])
        b = 0.0
        n = len(y)
        for _ in range(max_iter):
            p = stable_sigmoid(Xs @ w + b)
            resid = p - y
            grad_w = Xs.T @ resid / n + l2 * w
            grad_b = float(resid.mean())
            if max(np.abs(grad_w).max(initial=0.0), abs(grad_b)) < tolerance:
                break
            w -= learning_rate * grad_w
            b -= learning_rate * grad_b
        self.weights = w
        self.bias = b
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Xs = (X - self.mean) / self.scale
        return stable_sigmoid(Xs @ self.weights + self.bias)

    def to_dict(self) -> dict[str, Any]:
        return {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "LogisticModel":
        model = cls()
        model.weights = np.asarray(payload["weights"], dtype=float)
        model.bias = float(payload["bias"])
        model.mean = np.asarray(payload["mean"], dtype=float)
        model.scale = np.asarray(payload["scale"], dtype=float)
        return model


# ---------------------------------------------------------------------------
# CART decision tree (Gini impurity)


def _gini_terms(n_pos: np.ndarray, n_tot: np.ndarray) -> np.ndarray:
    # n_tot * gini = n_tot - (n_pos^2 + n_neg^2) / n_tot, vectorized and
    # safe because callers never pass n_tot == 0.
    n_neg = n_tot - n_pos
    return n_tot - (n_pos * n_pos + n_neg * n_neg) / n_tot


def _best_tree_split(
    X: np.ndarray, y: np.ndarray, features: np.ndarray
) -> tuple[int, float] | None:
    n = len(y)
    total_pos = float(y.sum())
    parent = _gini_terms(np.array([total_pos]), np.array([float(n)]))[0]
    best: tuple[float, int, float] | None = None
    for j in features:
        x = X[:, j]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        cuts = np.nonzero(xs[1:] > xs[:-1])[0]
        if cuts.size == 0:
            continue
        cum_pos = np.cumsum(y[order])
        n_left = (cuts + 1).astype(float)
        pos_left = cum_pos[cuts]
        impurity = _gini_terms(pos_left, n_left) + _gini_terms(
            total_pos - pos_left, n - n_left
        )
        k = int(np.argmin(impurity))
        gain = parent - impurity[k]
        if gain > 1e-12 and (best is None or impurity[k] < best[0] - 1e-15):
            threshold = (xs[cuts[k]] + xs[cuts[k] + 1]) / 2.0
            best = (float(impurity[k]), int(j), float(threshold))
    if best is None:
        return None
    return best[1], best[2]


class DecisionTree:
    """Binary CART with optional per-node feature subsampling (for forests)."""

    def __init__(self) -> None:
        self.nodes: dict[str, Any] = {}

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        feature_rng: np.random.Generator | None = None,
        features_per_split: int | None = None,
    ) -> "DecisionTree":
        # Single-class targets are legal here (bootstrap resamples inside a
        # forest can be pure); the tree then degenerates to one leaf.
        _check_training_inputs(X, y, require_two_classes=False)
        y = np.asarray(y, dtype=float)
        self._rng = feature_rng
        self._k = features_per_split
        self.nodes = self._grow(X, y, 0, max_depth, min_samples_split)
        return self

    def _grow(
        self,
        X: np.ndarray,
        y: np.ndarray,
        depth: int,
        max_depth: int | None,
        min_samples_split: int,
    ) -> dict[str, Any]:
        prob = float(y.mean())
        if (
            prob in (0.0, 1.0)
            or len(y) < min_samples_split
            or (max_depth is not None and depth >= max_depth)
        ):
            return {"leaf": prob}
        d = X.shape[1]
        if self._rng is not None and self._k is not None and self._k < d:
            features = np.sort(self._rng.choice(d, size=self._k, replace=False))
        else:
            features = np.arange(d)
        split = _best_tree_split(X, y, features)
        if split is None:
            return {"leaf": prob}
        feature, threshold = split
        mask = X[:, feature] <= threshold
        return {
            "feature": feature,
            "threshold": threshold,
            "left": self._grow(X[mask], y[mask], depth + 1, max_depth, min_samples_split),
            "right": self._grow(X[~mask], y[~mask], depth + 1, max_depth, min_samples_split),
        }

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X))
        for i, row in enumerate(X):
            node = self.nodes
            while "leaf" not in node:
                branch = "left" if row[node["feature"]] <= node["threshold"] else "right"
                node = node[branch]
            out[i] = node["leaf"]
        return out

    def to_dict(self) -> dict[str, Any]:
        return {"nodes": self.nodes}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "DecisionTree":
        model = cls()
        model.nodes = payload["nodes"]
        return model


# ---------------------------------------------------------------------------
# Gaussian naive Bayes


class GaussianNB:
    def __init__(self) -> None:
        self.priors = np.zeros(2)
        self.means = np.zeros((2, 0))
        self.variances = np.ones((2, 0))

    def fit(self, X: np.ndarray, y: np.ndarray, var_smoothing: float = 1e-9) -> "GaussianNB":
        _check_training_inputs(X, y)
        y = np.asarray(y, dtype=int)
        spread = float(X.var(axis=0).max())
        smoothing = var_smoothing * (spread if spread > 0 else 1.0)
        self.priors = np.array([(y == c).mean() for c in (0, 1)])
        self.means = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
        self.variances = np.stack(
            [X[y == c].var(axis=0) + smoothing for c in (0, 1)]
        )
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        log_joint = np.empty((len(X), 2))
        for c in (0, 1):
            log_lik = -0.5 * (
                np.log(2.0 * np.pi * self.variances[c])
                + (X - self.means[c]) ** 2 / self.variances[c]
            ).sum(axis=1)
            log_joint[:, c] = np.log(self.priors[c]) + log_lik
        log_joint -= log_joint.max(axis=1, keepdims=True)
        joint = np.exp(log_joint)
        return joint[:, 1] / joint.sum(axis=1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "priors": self.priors.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "GaussianNB":
        model = cls()
        model.priors = np.asarray(payload["priors"], dtype=float)
        model.means = np.asarray(payload["means"], dtype=float)
        model.variances = np.asarray(payload["variances"], dtype=float)
        return model


# ---------------------------------------------------------------------------
# Random forest


class RandomForest:
    """Bagged CART trees with sqrt(d) feature sampling at each split."""

    def __init__(self, n_trees: int = 100, max_depth: int | None = None, seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.seed = seed
        self.trees: list[DecisionTree] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForest":
        _check_training_inputs(X, y)
        n, d = X.shape
        k = max(1, int(round(np.sqrt(d))))
        seeds = np.random.SeedSequence(self.seed).spawn(self.n_trees)
        self.trees = []
        for seq in seeds:
            rng = np.random.Generator(np.random.PCG64(seq))
            idx = rng.integers(0, n, size=n)
            tree = DecisionTree().fit(
                X[idx],
                y[idx],
                max_depth=self.max_depth,
                feature_rng=rng,
                features_per_split=k,
            )
            self.trees.append(tree)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.predict_proba(X)
        return total / len(self.trees)
