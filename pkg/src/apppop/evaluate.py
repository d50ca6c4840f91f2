"""Leave-one-out cross-validation and metric computation.

Every app is held out exactly once; SMOTE, when enabled, sees only the
training rows of each fold, and the report keeps per-fold predictions so
all metrics can be recomputed from raw material.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .learners import ModelSpec, fit, oversample_training


@dataclass
class FoldPrediction:
    app_id: str
    truth: float
    score: float


@dataclass
class EvalReport:
    task: str
    family: str
    feature_set: str
    target: str
    hyperparameters: dict
    seed: int
    smote: bool
    n_instances: int
    n_folds_evaluated: int
    degenerate_folds: list[str]
    leakage_audit_passed: bool
    metrics: dict[str, float]
    predictions: list[FoldPrediction]
    smote_sources: dict[str, list[str]] = field(default_factory=dict)  # held-out app -> generating app ids
    provenance: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "task": self.task,
            "family": self.family,
            "feature_set": self.feature_set,
            "target": self.target,
            "hyperparameters": self.hyperparameters,
            "seed": self.seed,
            "smote": self.smote,
            "n_instances": self.n_instances,
            "n_folds_evaluated": self.n_folds_evaluated,
            "degenerate_folds": list(self.degenerate_folds),
            "leakage_audit_passed": self.leakage_audit_passed,
            "metrics": self.metrics,
            "predictions": [[p.app_id, p.truth, p.score] for p in self.predictions],
            "smote_sources": self.smote_sources,
            "provenance": self.provenance,
        }


def classification_metrics(preds: list[FoldPrediction], threshold: float = 0.5, allow_single_class: bool = False) -> dict[str, float]:
    """Per-class precision/recall/F1, rank-based AUC (ties 0.5), and MCC.

    AUC needs both truth classes; with allow_single_class it is reported as
    None instead of raising (used for tiny LOOCV runs whose degenerate folds
    removed one class from the pooled predictions).
    """
    if not preds:
        raise DataError("no predictions to score")
    truth = np.array([p.truth for p in preds])
    scores = np.array([p.score for p in preds])
    labels = (scores >= threshold).astype(float)
    tp = float(np.sum((labels == 1) & (truth == 1)))
    fp = float(np.sum((labels == 1) & (truth == 0)))
    fn = float(np.sum((labels == 0) & (truth == 1)))
    tn = float(np.sum((labels == 0) & (truth == 0)))

    def prf(tp_, fp_, fn_):
        precision = tp_ / (tp_ + fp_) if tp_ + fp_ > 0 else 0.0
        recall = tp_ / (tp_ + fn_) if tp_ + fn_ > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        return precision, recall, f1

    precision_pos, recall_pos, f1_pos = prf(tp, fp, fn)
    precision_neg, recall_neg, f1_neg = prf(tn, fn, fp)

    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc = (tp * tn - fp * fn) / math.sqrt(denom) if denom > 0 else 0.0

    n_pos = int(truth.sum())
    n_neg = len(truth) - n_pos
    if n_pos == 0 or n_neg == 0:
        if not allow_single_class:
            raise DataError("AUC requires at least one instance of each class")
        auc = None
    else:
        order = np.argsort(scores, kind="mergesort")
        ranks = np.empty(len(scores))
        sorted_scores = scores[order]
        i = 0
        while i < len(scores):
            j = i
            while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
                j += 1
            ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0  # average rank, 1-based
            i = j + 1
        auc = (float(ranks[truth == 1].sum()) - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)

    return {
        "precision_popular": precision_pos,
        "recall_popular": recall_pos,
        "f1_popular": f1_pos,
        "precision_unpopular": precision_neg,
        "recall_unpopular": recall_neg,
        "f1_unpopular": f1_neg,
        "auc": auc,
        "mcc": mcc,
        "accuracy": (tp + tn) / len(truth),
    }


def regression_metrics(preds: list[FoldPrediction]) -> dict[str, float]:
    if len(preds) < 2:
        raise DataError("regression metrics need at least 2 predictions")
    truth = np.array([p.truth for p in preds])
    pred = np.array([p.score for p in preds])
    sst = float(np.sum((truth - truth.mean()) ** 2))
    if sst == 0:
        raise DataError("zero-variance truth: R^2 undefined")
    sse = float(np.sum((truth - pred) ** 2))
    return {
        "rmse": math.sqrt(sse / len(truth)),
        "mae": float(np.mean(np.abs(truth - pred))),
        "r2": 1.0 - sse / sst,
    }


def trim_outliers(app_ids: list[str], values: list[float], k: float = 1.5) -> tuple[list[str], list[str]]:
    """Tukey fences on the target; returns (kept ids, dropped ids)."""
    if len(values) < 4:
        raise DataError("outlier trimming needs at least 4 values")
    if math.isinf(k):
        return list(app_ids), []
    data = sorted(values)
    n = len(data)

    def q(p: float) -> float:
        r = p * (n - 1)
        lo = math.floor(r)
        hi = math.ceil(r)
        return data[lo] + (r - lo) * (data[hi] - data[lo])

    q1, q3 = q(0.25), q(0.75)
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - k * iqr, q3 + k * iqr
    kept, dropped = [], []
    for app_id, v in zip(app_ids, values):
        (kept if lo_fence <= v <= hi_fence else dropped).append(app_id)
    return kept, dropped


def loocv(
    X: np.ndarray,
    y: np.ndarray,
    app_ids: list[str],
    spec: ModelSpec,
    feature_names: list[str] | None = None,
    smote: bool = False,
    smote_k: int = 5,
    seed: int = 0,
    feature_set: str = "",
    target: str = "",
    threshold: float = 0.5,
) -> EvalReport:
    """n folds, each app held out exactly once; metrics on pooled predictions."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 3:
        raise DataError("LOOCV needs at least 3 instances")
    if len(app_ids) != n or len(X) != n:
        raise DataError("X, y, app_ids must align")
    if spec.task == "classification" and len(np.unique(y)) < 2:
        raise DataError("classification LOOCV requires both classes present")
    predictions: list[FoldPrediction] = []
    degenerate: list[str] = []
    smote_sources: dict[str, list[str]] = {}
    leakage_ok = True
    for i in range(n):
        train_idx = np.concatenate([np.arange(i), np.arange(i + 1, n)])
        held_out = app_ids[i]
        train_ids = [app_ids[j] for j in train_idx]
        assert held_out not in train_ids, "leakage: held-out app in training fold"
        X_train, y_train = X[train_idx], y[train_idx]
        if spec.task == "classification":
            classes, counts = np.unique(y_train, return_counts=True)
            if len(classes) < 2:
                degenerate.append(held_out)
                continue
            if smote and counts.min() < 2 and counts[0] != counts[1]:
                degenerate.append(held_out)  # SMOTE cannot interpolate a 1-sample minority
                continue
        if smote and spec.task == "classification":
            fold_seed = (seed * 1000003 + i) % (2**31 - 1)
            X_train, y_train, min_rows, result = oversample_training(X_train, y_train, k=smote_k, seed=fold_seed)
            sources = sorted({train_ids[min_rows[a]] for (a, b, _) in result.provenance} | {train_ids[min_rows[b]] for (a, b, _) in result.provenance}) if result.provenance else []
            if sources:
                smote_sources[held_out] = sources
            if held_out in sources:
                leakage_ok = False
        model = fit(spec, X_train, y_train, schema=feature_names)
        score = float(model.predict_scores(X[i : i + 1], schema=feature_names)[0])
        predictions.append(FoldPrediction(app_id=held_out, truth=float(y[i]), score=score))
    if spec.task == "classification":
        metrics = classification_metrics(predictions, threshold=threshold, allow_single_class=True)
    else:
        metrics = regression_metrics(predictions)
    return EvalReport(
        task=spec.task,
        family=spec.family,
        feature_set=feature_set,
        target=target,
        hyperparameters=spec.hyperparameters,
        seed=spec.seed,
        smote=smote,
        n_instances=n,
        n_folds_evaluated=len(predictions),
        degenerate_folds=degenerate,
        leakage_audit_passed=leakage_ok,
        metrics=metrics,
        predictions=predictions,
        smote_sources=smote_sources,
        provenance={"loocv_seed": seed, "threshold": threshold, "n_features": X.shape[1]},
    )


def write_report_json(path: Path, reports: list[EvalReport], config_hash: str = "") -> None:
    doc = {"config": config_hash, "reports": [r.to_json_dict() for r in reports]}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
