import math

import numpy as np
import pytest

from apppop.errors import DataError
from apppop.evaluate import (
    FoldPrediction,
    classification_metrics,
    loocv,
    regression_metrics,
    trim_outliers,
)
from apppop.learners import ModelSpec


def preds_from_confusion(tp, fp, fn, tn):
    preds = []
    idx = 0
    for _ in range(tp):
        preds.append(FoldPrediction(f"a{idx}", 1.0, 0.9)); idx += 1
    for _ in range(fp):
        preds.append(FoldPrediction(f"a{idx}", 0.0, 0.9)); idx += 1
    for _ in range(fn):
        preds.append(FoldPrediction(f"a{idx}", 1.0, 0.1)); idx += 1
    for _ in range(tn):
        preds.append(FoldPrediction(f"a{idx}", 0.0, 0.1)); idx += 1
    return preds


class TestClassificationMetrics:
    def test_hand_confusion(self):
        m = classification_metrics(preds_from_confusion(40, 10, 20, 30))
        assert m["precision_popular"] == pytest.approx(0.8, abs=1e-4)
        assert m["recall_popular"] == pytest.approx(2 / 3, abs=1e-4)
        assert m["f1_popular"] == pytest.approx(0.7273, abs=1e-4)
        # (40*30 - 10*20) / sqrt(50*60*40*50)
        assert m["mcc"] == pytest.approx(1000 / math.sqrt(6_000_000), abs=1e-4)

    def test_perfect_predictor(self):
        preds = [FoldPrediction("a", 1.0, 0.99), FoldPrediction("b", 0.0, 0.01), FoldPrediction("c", 1.0, 0.8)]
        m = classification_metrics(preds)
        assert m["f1_popular"] == 1.0 and m["f1_unpopular"] == 1.0 and m["auc"] == 1.0 and m["mcc"] == 1.0

    def test_auc_fully_separated(self):
        preds = [
            FoldPrediction("a", 1.0, 0.9), FoldPrediction("b", 1.0, 0.8),
            FoldPrediction("c", 0.0, 0.7), FoldPrediction("d", 0.0, 0.1),
        ]
        assert classification_metrics(preds)["auc"] == 1.0

    def test_auc_tie_half_credit(self):
        preds = [FoldPrediction("a", 1.0, 0.5), FoldPrediction("b", 0.0, 0.5)]
        assert classification_metrics(preds)["auc"] == 0.5

    def test_auc_monotone_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = rng.integers(4, 30)
            truth = rng.integers(0, 2, n).astype(float)
            if truth.min() == truth.max():
                continue
            scores = rng.random(n)
            base = classification_metrics([FoldPrediction(str(i), t, s) for i, (t, s) in enumerate(zip(truth, scores))])["auc"]
            transformed = classification_metrics(
                [FoldPrediction(str(i), t, math.exp(3 * s) + 1) for i, (t, s) in enumerate(zip(truth, scores))]
            )["auc"]
            assert transformed == pytest.approx(base, abs=1e-12)

    def test_mcc_zero_denominator(self):
        preds = [FoldPrediction("a", 1.0, 0.9), FoldPrediction("b", 0.0, 0.9)]
        assert classification_metrics(preds)["mcc"] == 0.0

    def test_empty_errors(self):
        with pytest.raises(DataError):
            classification_metrics([])


class TestRegressionMetrics:
    def test_perfect(self):
        preds = [FoldPrediction(str(i), float(i), float(i)) for i in range(5)]
        m = regression_metrics(preds)
        assert m["rmse"] == 0 and m["mae"] == 0 and m["r2"] == 1.0

    def test_predicting_mean_gives_zero_r2(self):
        truth = [1.0, 2.0, 3.0]
        preds = [FoldPrediction(str(i), t, 2.0) for i, t in enumerate(truth)]
        m = regression_metrics(preds)
        assert m["mae"] == pytest.approx(2 / 3)
        assert m["rmse"] == pytest.approx(math.sqrt(2 / 3))
        assert m["r2"] == pytest.approx(0.0)

    def test_zero_variance_truth_errors(self):
        preds = [FoldPrediction("a", 2.0, 1.0), FoldPrediction("b", 2.0, 3.0)]
        with pytest.raises(DataError):
            regression_metrics(preds)


class TestTrimOutliers:
    def test_no_outliers_identity(self):
        ids = [str(i) for i in range(8)]
        kept, dropped = trim_outliers(ids, list(range(8)))
        assert kept == ids and dropped == []

    def test_extreme_value_dropped(self):
        values = list(range(1, 11)) + [1000]
        ids = [str(v) for v in values]
        kept, dropped = trim_outliers(ids, [float(v) for v in values])
        assert dropped == ["1000"]

    def test_infinite_k_identity(self):
        ids = ["a", "b", "c", "d"]
        kept, dropped = trim_outliers(ids, [1.0, 2.0, 3.0, 99999.0], k=math.inf)
        assert kept == ids and dropped == []


def linear_synthetic(n=24, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 4))
    y = (X[:, 0] + 0.6 * X[:, 1] > 0).astype(float)
    ids = [f"app{i:02d}" for i in range(n)]
    return X, y, ids


class TestLoocv:
    def test_every_app_held_out_once(self):
        X, y, ids = linear_synthetic()
        report = loocv(X, y, ids, ModelSpec("logistic_regression", "classification"), smote=False)
        assert report.n_folds_evaluated == len(ids)
        assert sorted(p.app_id for p in report.predictions) == sorted(ids)

    def test_three_instances_three_folds(self):
        X = np.array([[0.0], [1.0], [2.0]])
        y = np.array([0.0, 1.0, 1.0])
        report = loocv(X, y, ["a", "b", "c"], ModelSpec("decision_tree", "classification"), smote=False)
        assert report.n_instances == 3 and len(report.predictions) + len(report.degenerate_folds) == 3

    def test_constant_model_minority_recall_zero(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(20, 2))  # no signal
        y = np.array([1.0] * 12 + [0.0] * 8)
        report = loocv(X, y, [str(i) for i in range(20)], ModelSpec("decision_tree", "classification", {"max_depth": 1, "min_leaf": 10}), smote=False)
        assert report.metrics["recall_unpopular"] == 0.0

    def test_smote_leakage_audit(self):
        X, y, ids = linear_synthetic(n=21, seed=3)
        y[:15] = 1.0
        y[15:] = 0.0
        report = loocv(X, y, ids, ModelSpec("logistic_regression", "classification"), smote=True, seed=5)
        assert report.leakage_audit_passed
        for held_out, sources in report.smote_sources.items():
            assert held_out not in sources

    def test_report_metrics_recomputable(self):
        X, y, ids = linear_synthetic(seed=9)
        report = loocv(X, y, ids, ModelSpec("logistic_regression", "classification"), smote=False)
        again = classification_metrics(report.predictions)
        assert again == report.metrics

    def test_deterministic(self):
        X, y, ids = linear_synthetic(seed=11)
        spec = ModelSpec("mlp", "classification", {"epochs": 10}, seed=2)
        r1 = loocv(X, y, ids, spec, smote=True, seed=7)
        r2 = loocv(X, y, ids, spec, smote=True, seed=7)
        assert [p.score for p in r1.predictions] == [p.score for p in r2.predictions]

    def test_requires_both_classes(self):
        X = np.zeros((5, 2))
        with pytest.raises(DataError):
            loocv(X, np.ones(5), list("abcde"), ModelSpec("logistic_regression", "classification"))

    def test_regression_loocv(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(15, 3))
        y = X @ np.array([2.0, 0.0, -1.0]) + 5
        report = loocv(X, y, [str(i) for i in range(15)], ModelSpec("ridge", "regression"))
        assert report.metrics["r2"] > 0.9
