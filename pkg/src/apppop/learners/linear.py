"""Linear models trained from scratch: logistic regression, ridge, lasso.

All operate on already-standardized design matrices; the wrapping
TrainedModel owns standardization. Loss/gradient entry points are exposed
separately so finite-difference checks can probe them directly.
"""

from __future__ import annotations

import numpy as np


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def lr_loss_and_grad(wb: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float) -> tuple[float, np.ndarray]:
    """Mean binary cross-entropy + (l2/2)*||w||^2; intercept unpenalized.

    wb stacks [w (d), b (1)].
    """
    w, b = wb[:-1], wb[-1]
    z = X @ w + b
    p = sigmoid(z)
    eps = 1e-12
    loss = -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)) + 0.5 * l2 * float(w @ w)
    resid = (p - y) / len(y)
    grad_w = X.T @ resid + l2 * w
    grad_b = resid.sum()
    return float(loss), np.concatenate([grad_w, [grad_b]])


class LogisticRegressionModel:
    """L2-regularized logistic regression, full-batch gradient descent."""

    def __init__(self, l2: float = 1e-2, epochs: int = 500, lr: float = 0.1):
        self.l2 = l2
        self.epochs = epochs
        self.lr = lr
        self.w: np.ndarray | None = None
        self.b = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticRegressionModel":
        n, d = X.shape
        wb = np.zeros(d + 1)
        for _ in range(self.epochs):
            _, grad = lr_loss_and_grad(wb, X, y, self.l2)
            wb -= self.lr * grad
        self.w = wb[:-1].copy()
        self.b = float(wb[-1])
        return self

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(X @ self.w + self.b)

    def coefficients(self) -> np.ndarray:
        return self.w

    def params(self) -> dict:
        return {"w": self.w.tolist(), "b": self.b}

    def load_params(self, params: dict) -> None:
        self.w = np.asarray(params["w"], dtype=float)
        self.b = float(params["b"])


def ridge_solve(X: np.ndarray, y: np.ndarray, l2: float) -> np.ndarray:
    """Closed-form ridge: solve (X'X + l2*I) w = X'y."""
    d = X.shape[1]
    return np.linalg.solve(X.T @ X + l2 * np.eye(d), X.T @ y)


class RidgeModel:
    """Ridge regression; intercept handled by centering, not penalized."""

    def __init__(self, l2: float = 1.0):
        self.l2 = l2
        self.w: np.ndarray | None = None
        self.b = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RidgeModel":
        x_mean = X.mean(axis=0)
        y_mean = float(np.mean(y))
        self.w = ridge_solve(X - x_mean, y - y_mean, self.l2)
        self.b = y_mean - float(x_mean @ self.w)
        return self

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        return X @ self.w + self.b

    def coefficients(self) -> np.ndarray:
        return self.w

    def params(self) -> dict:
        return {"w": self.w.tolist(), "b": self.b}

    def load_params(self, params: dict) -> None:
        self.w = np.asarray(params["w"], dtype=float)
        self.b = float(params["b"])


def _soft_threshold(value: float, bound: float) -> float:
    if value > bound:
        return value - bound
    if value < -bound:
        return value + bound
    return 0.0


class LassoModel:
    """Lasso via cyclic coordinate descent.

    Objective: (1/2n)||y - Xw - b||^2 + l1 * ||w||_1, intercept unpenalized.
    """

    def __init__(self, l1: float = 1e-2, max_iter: int = 1000, tol: float = 1e-10):
        self.l1 = l1
        self.max_iter = max_iter
        self.tol = tol
        self.w: np.ndarray | None = None
        self.b = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LassoModel":
        n, d = X.shape
        x_mean = X.mean(axis=0)
        y_mean = float(np.mean(y))
        Xc = X - x_mean
        yc = y - y_mean
        w = np.zeros(d)
        col_sq = (Xc * Xc).sum(axis=0) / n
        resid = yc.copy()
        for _ in range(self.max_iter):
            max_delta = 0.0
            for j in range(d):
                if col_sq[j] == 0.0:
                    continue
                rho = float(Xc[:, j] @ resid) / n + col_sq[j] * w[j]
                new_wj = _soft_threshold(rho, self.l1) / col_sq[j]
                delta = new_wj - w[j]
                if delta != 0.0:
                    resid -= Xc[:, j] * delta
                    w[j] = new_wj
                    max_delta = max(max_delta, abs(delta))
            if max_delta < self.tol:
                break
        self.w = w
        self.b = y_mean - float(x_mean @ w)
        return self

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        return X @ self.w + self.b

    def coefficients(self) -> np.ndarray:
        return self.w

    def params(self) -> dict:
        return {"w": self.w.tolist(), "b": self.b}

    def load_params(self, params: dict) -> None:
        self.w = np.asarray(params["w"], dtype=float)
        self.b = float(params["b"])
