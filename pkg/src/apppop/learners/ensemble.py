"""Bagged and boosted tree ensembles built on the CART implementation."""

from __future__ import annotations

import math

import numpy as np

from .linear import sigmoid
from .tree import DecisionTreeModel, _Node


class RandomForestModel:
    """Bootstrap-aggregated CART trees with per-split feature subsampling.

    mtry defaults to sqrt(d) for classification and d/3 for regression.
    Per-tree RNGs derive from (seed, tree index), so results match whether
    trees are grown sequentially or in parallel.
    """

    def __init__(self, task: str, n_trees: int = 200, max_depth: int = 8, min_leaf: int = 2, seed: int = 0):
        self.task = task
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.seed = seed
        self.trees: list[DecisionTreeModel] = []
        self.feature_importance: np.ndarray | None = None

    def _mtry(self, d: int) -> int:
        if self.task == "classification":
            return max(1, int(math.sqrt(d)))
        return max(1, d // 3)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForestModel":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n, d = X.shape
        mtry = self._mtry(d)
        self.trees = []
        importance = np.zeros(d)
        for t in range(self.n_trees):
            rng = np.random.default_rng(np.random.SeedSequence([self.seed & 0x7FFFFFFF, t]))
            idx = rng.integers(0, n, size=n)
            tree = DecisionTreeModel(self.task, self.max_depth, self.min_leaf)
            tree.fit(X[idx], y[idx], rng=rng, mtry=mtry)
            self.trees.append(tree)
            importance += tree.feature_importance
        total = importance.sum()
        self.feature_importance = importance / total if total > 0 else importance
        return self

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        preds = np.zeros(len(X))
        for tree in self.trees:
            preds += tree.predict_scores(X)
        return preds / len(self.trees)

    def coefficients(self) -> np.ndarray:
        return self.feature_importance

    def params(self) -> dict:
        return {"trees": [t.params() for t in self.trees]}

    def load_params(self, params: dict) -> None:
        self.trees = []
        for doc in params["trees"]:
            tree = DecisionTreeModel(self.task, self.max_depth, self.min_leaf)
            tree.load_params(doc)
            self.trees.append(tree)


class GradientBoostingModel:
    """Gradient boosting with depth-limited regression trees.

    Classification uses logistic loss with Newton leaf steps (clamped);
    regression uses squared loss with mean leaves. Training loss per round
    is recorded for monotonicity checks.
    """

    def __init__(self, task: str, n_rounds: int = 200, depth: int = 3, shrinkage: float = 0.1, min_leaf: int = 1, seed: int = 0):
        self.task = task
        self.n_rounds = n_rounds
        self.depth = depth
        self.shrinkage = shrinkage
        self.min_leaf = min_leaf
        self.seed = seed
        self.init_value = 0.0
        self.trees: list[DecisionTreeModel] = []
        self.leaf_values: list[dict[int, float]] = []
        self.train_loss: list[float] = []
        self.feature_importance: np.ndarray | None = None

    def _loss(self, y: np.ndarray, f: np.ndarray) -> float:
        if self.task == "classification":
            p = sigmoid(f)
            eps = 1e-12
            return float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
        return float(np.mean((y - f) ** 2))

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GradientBoostingModel":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n, d = X.shape
        if self.task == "classification":
            pos = float(np.clip(np.mean(y), 1e-6, 1 - 1e-6))
            self.init_value = math.log(pos / (1 - pos))
        else:
            self.init_value = float(np.mean(y))
        f = np.full(n, self.init_value)
        self.trees = []
        self.leaf_values = []
        self.train_loss = [self._loss(y, f)]
        importance = np.zeros(d)
        for _ in range(self.n_rounds):
            if self.task == "classification":
                p = sigmoid(f)
                residual = y - p
                hessian = np.maximum(p * (1 - p), 1e-6)
            else:
                residual = y - f
                hessian = np.ones(n)
            tree = DecisionTreeModel("regression", self.depth, self.min_leaf)
            tree.fit(X, residual)
            leaf_ids = self._leaf_assignments(tree, X)
            values: dict[int, float] = {}
            for leaf in np.unique(leaf_ids):
                mask = leaf_ids == leaf
                gamma = float(residual[mask].sum() / hessian[mask].sum())
                values[int(leaf)] = float(np.clip(gamma, -10.0, 10.0))
            f = f + self.shrinkage * np.array([values[int(l)] for l in leaf_ids])
            self.trees.append(tree)
            self.leaf_values.append(values)
            importance += tree.feature_importance
            self.train_loss.append(self._loss(y, f))
        total = importance.sum()
        self.feature_importance = importance / total if total > 0 else importance
        return self

    @staticmethod
    def _leaf_assignments(tree: DecisionTreeModel, X: np.ndarray) -> np.ndarray:
        ids = np.empty(len(X), dtype=int)
        for i, x in enumerate(X):
            node = tree.root
            code = 1
            while not node.is_leaf():
                if x[node.feature] <= node.threshold:
                    node = node.left
                    code = code * 2
                else:
                    node = node.right
                    code = code * 2 + 1
            ids[i] = code
        return ids

    def _raw(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        f = np.full(len(X), self.init_value)
        for tree, values in zip(self.trees, self.leaf_values):
            leaf_ids = self._leaf_assignments(tree, X)
            f += self.shrinkage * np.array([values[int(l)] for l in leaf_ids])
        return f

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        f = self._raw(X)
        if self.task == "classification":
            return sigmoid(f)
        return f

    def coefficients(self) -> np.ndarray:
        return self.feature_importance

    def params(self) -> dict:
        return {
            "init_value": self.init_value,
            "trees": [t.params() for t in self.trees],
            "leaf_values": [{str(k): v for k, v in lv.items()} for lv in self.leaf_values],
        }

    def load_params(self, params: dict) -> None:
        self.init_value = params["init_value"]
        self.trees = []
        for doc in params["trees"]:
            tree = DecisionTreeModel("regression", self.depth, self.min_leaf)
            tree.load_params(doc)
            self.trees.append(tree)
        self.leaf_values = [{int(k): float(v) for k, v in lv.items()} for lv in params["leaf_values"]]
