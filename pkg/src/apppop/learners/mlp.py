"""Single-hidden-layer perceptron with rectified units and Adam updates."""

from __future__ import annotations

import numpy as np

from .linear import sigmoid


def _unpack(flat: np.ndarray, d: int, h: int):
    W1 = flat[: d * h].reshape(d, h)
    b1 = flat[d * h : d * h + h]
    w2 = flat[d * h + h : d * h + 2 * h]
    b2 = flat[-1]
    return W1, b1, w2, b2


def mlp_loss_and_grad(flat: np.ndarray, X: np.ndarray, y: np.ndarray, hidden: int, task: str) -> tuple[float, np.ndarray]:
    """Full-batch loss and analytic gradient at an arbitrary parameter point.

    Classification: mean binary cross-entropy on a sigmoid output.
    Regression: 0.5 * mean squared error on a linear output.
    """
    n, d = X.shape
    W1, b1, w2, b2 = _unpack(flat, d, hidden)
    Z = X @ W1 + b1
    A = np.maximum(Z, 0.0)
    f = A @ w2 + b2
    if task == "classification":
        p = sigmoid(f)
        eps = 1e-12
        loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
        df = (p - y) / n
    else:
        err = f - y
        loss = float(0.5 * np.mean(err * err))
        df = err / n
    grad_w2 = A.T @ df
    grad_b2 = float(df.sum())
    dA = np.outer(df, w2)
    dZ = dA * (Z > 0)
    grad_W1 = X.T @ dZ
    grad_b1 = dZ.sum(axis=0)
    grad = np.concatenate([grad_W1.ravel(), grad_b1, grad_w2, [grad_b2]])
    return loss, grad


def init_params(d: int, hidden: int, rng: np.random.Generator) -> np.ndarray:
    W1 = rng.normal(0.0, np.sqrt(2.0 / d), size=(d, hidden))
    b1 = np.zeros(hidden)
    w2 = rng.normal(0.0, np.sqrt(2.0 / hidden), size=hidden)
    b2 = np.zeros(1)
    return np.concatenate([W1.ravel(), b1, w2, b2])


class MLPModel:
    """One hidden ReLU layer trained with Adam on shuffled mini-batches."""

    def __init__(self, task: str, hidden: int = 64, lr: float = 1e-3, epochs: int = 200, batch: int = 16, seed: int = 0):
        self.task = task
        self.hidden = hidden
        self.lr = lr
        self.epochs = epochs
        self.batch = batch
        self.seed = seed
        self.flat: np.ndarray | None = None
        self.d = 0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "MLPModel":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n, d = X.shape
        self.d = d
        rng = np.random.default_rng(np.random.SeedSequence([self.seed & 0x7FFFFFFF, 77]))
        flat = init_params(d, self.hidden, rng)
        m = np.zeros_like(flat)
        v = np.zeros_like(flat)
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        step = 0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch):
                idx = order[start : start + self.batch]
                _, grad = mlp_loss_and_grad(flat, X[idx], y[idx], self.hidden, self.task)
                step += 1
                m = beta1 * m + (1 - beta1) * grad
                v = beta2 * v + (1 - beta2) * grad * grad
                m_hat = m / (1 - beta1**step)
                v_hat = v / (1 - beta2**step)
                flat = flat - self.lr * m_hat / (np.sqrt(v_hat) + eps)
        self.flat = flat
        return self

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        W1, b1, w2, b2 = _unpack(self.flat, self.d, self.hidden)
        A = np.maximum(X @ W1 + b1, 0.0)
        f = A @ w2 + b2
        if self.task == "classification":
            return sigmoid(f)
        return f

    def coefficients(self) -> np.ndarray:
        W1, _, w2, _ = _unpack(self.flat, self.d, self.hidden)
        return np.abs(W1 @ w2)

    def params(self) -> dict:
        return {"flat": self.flat.tolist(), "d": self.d, "hidden": self.hidden}

    def load_params(self, params: dict) -> None:
        self.flat = np.asarray(params["flat"], dtype=float)
        self.d = params["d"]
        self.hidden = params["hidden"]
