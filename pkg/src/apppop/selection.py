"""The three feature sets: Size-only, Handpicked(28), and Voting.

Voting runs six selectors per task and keeps every feature ranked in at
least half of the top-25 lists. Filter scores (Pearson, chi2, ANOVA F) are
computed directly; the wrapper is recursive elimination over a linear
max-margin model trained by subgradient descent; embedded selectors read
coefficients/importances out of this package's own learners.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .features import FeatureMatrix
from .learners import GradientBoostingModel, LassoModel, RandomForestModel, RidgeModel

CLASSIFICATION_SELECTORS = ("pearson", "chi2", "rfe_svc", "l1_logistic", "random_forest", "gradient_boosting")
REGRESSION_SELECTORS = ("pearson", "anova_f", "rfe_svr", "lasso", "ridge", "random_forest")

HANDPICKED_FEATURES = (
    "app_loc",
    "decoupling_level",
    "total_antipattern_count",
    "class_cbo_p10", "class_cbo_p50", "class_cbo_p90",
    "class_wmc_p10", "class_wmc_p50", "class_wmc_p90",
    "class_rfc_p10", "class_rfc_p50", "class_rfc_p90",
    "method_wmc_p10", "method_wmc_p50", "method_wmc_p90",
    "method_fan_in_p10", "method_fan_in_p50", "method_fan_in_p90",
    "method_fan_out_p10", "method_fan_out_p50", "method_fan_out_p90",
    "method_readability_p10", "method_readability_p50", "method_readability_p90",
    "smell_GodComponent", "smell_LongStatement", "smell_LongMethod",
    "contains_ads",
)


@dataclass
class SelectorResult:
    selector_name: str
    task: str
    ranked_features: list[str]


@dataclass
class VotingResult:
    votes: dict[str, int]
    selected: list[str]
    quorum: int
    per_selector: dict[str, list[str]] = field(default_factory=dict)


def size_only(matrix: FeatureMatrix) -> list[str]:
    if "app_loc" not in matrix.schema:
        raise DataError("size-only feature set requires the app_loc feature")
    return ["app_loc"]


def handpicked(matrix: FeatureMatrix) -> list[str]:
    missing = [name for name in HANDPICKED_FEATURES if name not in matrix.schema]
    if missing:
        raise DataError(f"handpicked feature set missing from schema: {missing}")
    return list(HANDPICKED_FEATURES)


# --------------------------------------------------------------- score kernels

def _standardize(X: np.ndarray) -> np.ndarray:
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd == 0, 1.0, sd)
    return (X - mean) / sd


def pearson_scores(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    xm = X - X.mean(axis=0)
    ym = y - y.mean()
    sx = np.sqrt((xm * xm).sum(axis=0))
    sy = float(np.sqrt((ym * ym).sum()))
    denom = sx * sy
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(denom > 0, xm.T @ ym / np.where(denom == 0, 1.0, denom), 0.0)
    return np.abs(r)


def anova_f_scores(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Regression F statistic derived from the squared correlation."""
    n = len(y)
    xm = X - X.mean(axis=0)
    ym = y - y.mean()
    sx = np.sqrt((xm * xm).sum(axis=0))
    sy = float(np.sqrt((ym * ym).sum()))
    denom = sx * sy
    r = np.where(denom > 0, xm.T @ ym / np.where(denom == 0, 1.0, denom), 0.0)
    r2 = np.clip(r * r, 0.0, 1.0 - 1e-12)
    return r2 / (1.0 - r2) * max(n - 2, 1)


def chi2_scores(X: np.ndarray, y: np.ndarray, bins: int = 10) -> np.ndarray:
    """Pearson chi-square of independence on min-shifted, equal-width-binned
    features against the class labels."""
    classes = np.unique(y)
    scores = np.zeros(X.shape[1])
    n = len(y)
    class_masks = [y == c for c in classes]
    for j in range(X.shape[1]):
        col = X[:, j] - X[:, j].min()
        hi = col.max()
        if hi == 0:
            continue  # constant feature
        binned = np.minimum((col / hi * bins).astype(int), bins - 1)
        stat = 0.0
        for b in range(bins):
            in_bin = binned == b
            total = int(in_bin.sum())
            if total == 0:
                continue
            for mask in class_masks:
                observed = float((in_bin & mask).sum())
                expected = total * float(mask.sum()) / n
                if expected > 0:
                    stat += (observed - expected) ** 2 / expected
        scores[j] = stat
    return scores


# ----------------------------------------------------- internal linear trainers

def _hinge_svm_coefs(X: np.ndarray, y01: np.ndarray, epochs: int = 120, lr0: float = 0.5, l2: float = 1e-3) -> np.ndarray:
    """Linear max-margin classifier by full-batch subgradient descent."""
    n, d = X.shape
    t = np.where(y01 > 0, 1.0, -1.0)
    w = np.zeros(d)
    b = 0.0
    for epoch in range(epochs):
        lr = lr0 / (1.0 + 0.1 * epoch)
        margins = t * (X @ w + b)
        active = margins < 1.0
        grad_w = l2 * w - (X[active].T @ t[active]) / n
        grad_b = -t[active].sum() / n
        w -= lr * grad_w
        b -= lr * grad_b
    return w


def _eps_svr_coefs(X: np.ndarray, y: np.ndarray, epochs: int = 120, lr0: float = 0.5, l2: float = 1e-3, eps: float = 0.1) -> np.ndarray:
    """Linear epsilon-insensitive regressor by full-batch subgradient descent."""
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    for epoch in range(epochs):
        lr = lr0 / (1.0 + 0.1 * epoch)
        resid = X @ w + b - y
        sign = np.where(resid > eps, 1.0, np.where(resid < -eps, -1.0, 0.0))
        grad_w = l2 * w + (X.T @ sign) / n
        grad_b = sign.sum() / n
        w -= lr * grad_w
        b -= lr * grad_b
    return w


def _l1_logistic_coefs(X: np.ndarray, y: np.ndarray, epochs: int = 300, lr: float = 0.1, l1: float = 1e-3) -> np.ndarray:
    """L1 logistic regression by proximal gradient (ISTA)."""
    from .learners.linear import sigmoid

    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    for _ in range(epochs):
        p = sigmoid(X @ w + b)
        resid = (p - y) / n
        w_step = w - lr * (X.T @ resid)
        w = np.sign(w_step) * np.maximum(np.abs(w_step) - lr * l1, 0.0)
        b -= lr * resid.sum()
    return w


def _rfe_rank(X: np.ndarray, y: np.ndarray, task: str, n_keep: int) -> list[int]:
    """Recursive feature elimination over the linear max-margin trainer.

    Drops chunks while far from the target, then single features; survivors
    come back ranked by final |coefficient|.
    """
    remaining = list(range(X.shape[1]))
    trainer = _hinge_svm_coefs if task == "classification" else _eps_svr_coefs
    while len(remaining) > n_keep:
        w = trainer(X[:, remaining], y)
        order = np.argsort(np.abs(w), kind="mergesort")  # ascending |w|; ties keep lower index first
        surplus = len(remaining) - n_keep
        drop_k = max(1, surplus // 4) if len(remaining) > 2 * n_keep else 1
        drop_k = min(drop_k, surplus)
        drop_positions = sorted(order[:drop_k].tolist(), reverse=True)
        for pos in drop_positions:
            remaining.pop(pos)
    w = trainer(X[:, remaining], y)
    ranked = sorted(range(len(remaining)), key=lambda i: (-abs(w[i]), remaining[i]))
    return [remaining[i] for i in ranked]


def run_selector(matrix: FeatureMatrix, y: np.ndarray, selector_name: str, task: str, n: int = 25, seed: int = 0) -> SelectorResult:
    """Top-n ranked features from one selector; deterministic under seed.

    Constant features score zero and are never ranked above varying ones.
    """
    valid = CLASSIFICATION_SELECTORS if task == "classification" else REGRESSION_SELECTORS
    if selector_name not in valid:
        raise ConfigError(f"selector {selector_name!r} not available for {task}")
    X = np.array([[row.values[name] for name in matrix.schema] for row in matrix.rows], dtype=float)
    y = np.asarray(y, dtype=float)
    if len(X) != len(y):
        raise DataError("matrix and target length mismatch")
    constant = X.std(axis=0) == 0
    Z = _standardize(X)
    if selector_name == "pearson":
        scores = pearson_scores(X, y)
    elif selector_name == "chi2":
        scores = chi2_scores(X, y)
    elif selector_name == "anova_f":
        scores = anova_f_scores(X, y)
    elif selector_name == "l1_logistic":
        scores = np.abs(_l1_logistic_coefs(Z, y))
    elif selector_name == "lasso":
        scores = np.abs(LassoModel(l1=1e-2).fit(Z, y).coefficients())
    elif selector_name == "ridge":
        scores = np.abs(RidgeModel(l2=1.0).fit(Z, y).coefficients())
    elif selector_name == "random_forest":
        scores = RandomForestModel(task, n_trees=200, seed=seed).fit(X, y).coefficients()
    elif selector_name == "gradient_boosting":
        scores = GradientBoostingModel(task, n_rounds=200, seed=seed).fit(X, y).coefficients()
    elif selector_name in ("rfe_svc", "rfe_svr"):
        usable = np.flatnonzero(~constant)
        kept = _rfe_rank(Z[:, usable], y, task, min(n, len(usable)))
        ranked_idx = [int(usable[i]) for i in kept]
        ranked_idx += [int(i) for i in np.flatnonzero(constant)][: max(0, n - len(ranked_idx))]
        return SelectorResult(selector_name, task, [matrix.schema[i] for i in ranked_idx[:n]])
    else:  # pragma: no cover
        raise ConfigError(selector_name)
    scores = np.where(constant, 0.0, scores)
    order = sorted(range(len(scores)), key=lambda i: (bool(constant[i]), -scores[i], i))
    return SelectorResult(selector_name, task, [matrix.schema[i] for i in order[:n]])


def run_all_selectors(matrix: FeatureMatrix, y: np.ndarray, task: str, n: int = 25, seed: int = 0) -> list[SelectorResult]:
    names = CLASSIFICATION_SELECTORS if task == "classification" else REGRESSION_SELECTORS
    return [run_selector(matrix, y, name, task, n=n, seed=seed) for name in names]


def vote(results: list[SelectorResult]) -> VotingResult:
    """Features recommended by at least half of the six selectors."""
    if len(results) != 6:
        raise DataError(f"voting requires exactly 6 selector results, got {len(results)}")
    tasks = {r.task for r in results}
    if len(tasks) != 1:
        raise DataError("voting requires selectors from a single task")
    quorum = 3
    votes: dict[str, int] = {}
    for res in results:
        for feat in set(res.ranked_features):
            votes[feat] = votes.get(feat, 0) + 1
    selected = sorted(f for f, v in votes.items() if v >= quorum)
    return VotingResult(
        votes=dict(sorted(votes.items())),
        selected=selected,
        quorum=quorum,
        per_selector={r.selector_name: list(r.ranked_features) for r in results},
    )


def write_selection_json(path: Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
