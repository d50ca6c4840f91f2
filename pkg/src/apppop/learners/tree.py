"""CART decision trees (gini / squared error) with deterministic tie-breaks.

Split search walks features in ascending index order and thresholds in
ascending value order; only strictly better splits replace the incumbent,
so ties resolve to the lowest feature index, then the lowest threshold.
"""

from __future__ import annotations

import numpy as np


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, value=None, feature=None, threshold=None, left=None, right=None):
        self.value = value
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right

    def is_leaf(self) -> bool:
        return self.feature is None

    def to_dict(self) -> dict:
        if self.is_leaf():
            return {"value": float(self.value)}
        return {
            "feature": int(self.feature),
            "threshold": float(self.threshold),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "_Node":
        if "feature" not in doc:
            return cls(value=doc["value"])
        return cls(
            feature=doc["feature"],
            threshold=doc["threshold"],
            left=cls.from_dict(doc["left"]),
            right=cls.from_dict(doc["right"]),
        )


def _impurity_scores_classification(y_sorted: np.ndarray) -> tuple[np.ndarray, float]:
    """Weighted gini for every split position s (left = first s rows)."""
    n = len(y_sorted)
    ones = np.cumsum(y_sorted)
    s = np.arange(1, n)
    left_ones = ones[:-1]
    right_ones = ones[-1] - left_ones
    nl = s.astype(float)
    nr = (n - s).astype(float)
    pl = left_ones / nl
    pr = right_ones / nr
    gini_l = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
    gini_r = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
    p = ones[-1] / n
    parent = 1.0 - p * p - (1.0 - p) * (1.0 - p)
    return nl * gini_l + nr * gini_r, float(n * parent)


def _impurity_scores_regression(y_sorted: np.ndarray) -> tuple[np.ndarray, float]:
    """Total child SSE for every split position."""
    n = len(y_sorted)
    csum = np.cumsum(y_sorted)
    csq = np.cumsum(y_sorted * y_sorted)
    s = np.arange(1, n)
    left_sum = csum[:-1]
    left_sq = csq[:-1]
    right_sum = csum[-1] - left_sum
    right_sq = csq[-1] - left_sq
    nl = s.astype(float)
    nr = (n - s).astype(float)
    sse_l = left_sq - left_sum * left_sum / nl
    sse_r = right_sq - right_sum * right_sum / nr
    parent = float(csq[-1] - csum[-1] * csum[-1] / n)
    return sse_l + sse_r, parent


class DecisionTreeModel:
    """Binary CART tree for classification (task='classification', y in {0,1})
    or regression. Leaf values are class-1 probability / target mean."""

    def __init__(self, task: str, max_depth: int = 8, min_leaf: int = 2):
        self.task = task
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.root: _Node | None = None
        self.n_features = 0
        self.feature_importance: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray, rng: np.random.Generator | None = None, mtry: int | None = None) -> "DecisionTreeModel":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self.n_features = X.shape[1]
        self.feature_importance = np.zeros(self.n_features)
        self.root = self._grow(X, y, self.max_depth, rng, mtry)
        return self

    def _leaf(self, y: np.ndarray) -> _Node:
        return _Node(value=float(np.mean(y)))

    def _grow(self, X: np.ndarray, y: np.ndarray, depth: int, rng, mtry) -> _Node:
        n = len(y)
        if depth <= 0 or n < 2 * self.min_leaf or np.all(y == y[0]):
            return self._leaf(y)
        if mtry is not None and rng is not None and mtry < self.n_features:
            candidates = np.sort(rng.choice(self.n_features, size=mtry, replace=False))
        else:
            candidates = np.arange(X.shape[1])
        best_score = np.inf
        best = None  # (feature, threshold, sorted order, split position)
        score_fn = _impurity_scores_classification if self.task == "classification" else _impurity_scores_regression
        for j in candidates:
            col = X[:, j]
            order = np.argsort(col, kind="mergesort")
            col_sorted = col[order]
            if col_sorted[0] == col_sorted[-1]:
                continue
            scores, parent_score = score_fn(y[order])
            valid = np.flatnonzero(
                (col_sorted[:-1] < col_sorted[1:])
                & (np.arange(1, n) >= self.min_leaf)
                & (np.arange(1, n) <= n - self.min_leaf)
            )
            if valid.size == 0:
                continue
            k = valid[np.argmin(scores[valid])]
            if scores[k] < best_score - 1e-12:
                best_score = float(scores[k])
                thr = (col_sorted[k] + col_sorted[k + 1]) / 2.0
                best = (int(j), float(thr), order, int(k), float(parent_score))
        if best is None:
            return self._leaf(y)
        j, thr, order, k, parent_score = best
        self.feature_importance[j] += parent_score - best_score
        mask = X[:, j] <= thr
        left = self._grow(X[mask], y[mask], depth - 1, rng, mtry)
        right = self._grow(X[~mask], y[~mask], depth - 1, rng, mtry)
        return _Node(feature=j, threshold=thr, left=left, right=right)

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty(len(X))
        for i, x in enumerate(X):
            node = self.root
            while not node.is_leaf():
                node = node.left if x[node.feature] <= node.threshold else node.right
            out[i] = node.value
        return out

    def coefficients(self) -> np.ndarray:
        return self.feature_importance

    def params(self) -> dict:
        return {"tree": self.root.to_dict(), "n_features": self.n_features}

    def load_params(self, params: dict) -> None:
        self.root = _Node.from_dict(params["tree"])
        self.n_features = params["n_features"]
