import json

import numpy as np
import pytest

from apppop.errors import ConfigError, DataError
from apppop.learners import (
    DEFAULT_HYPERPARAMETERS,
    ModelSpec,
    fit,
    init_params,
    load_model,
    lr_loss_and_grad,
    mlp_loss_and_grad,
    oversample_training,
    ridge_solve,
    smote,
)


def blobs(rng, n=60):
    X = np.vstack([rng.normal(-2, 0.6, (n // 2, 3)), rng.normal(2, 0.6, (n // 2, 3))])
    y = np.concatenate([np.zeros(n // 2), np.ones(n // 2)])
    return X, y


def xor_data(copies=50):
    base = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    X = np.tile(base, (copies, 1))
    y = np.tile(np.array([0.0, 1.0, 1.0, 0.0]), copies)
    return X, y


class TestModelSpec:
    def test_defaults_merged(self):
        spec = ModelSpec("logistic_regression", "classification")
        assert spec.hyperparameters == DEFAULT_HYPERPARAMETERS["logistic_regression"]

    def test_unknown_family_for_task(self):
        with pytest.raises(ConfigError):
            ModelSpec("lasso", "classification")

    def test_bad_hyperparameter_value(self):
        with pytest.raises(ConfigError):
            ModelSpec("decision_tree", "regression", {"max_depth": 0})

    def test_unknown_hyperparameter_key(self):
        with pytest.raises(ConfigError):
            ModelSpec("ridge", "regression", {"bogus": 1})


class TestFitValidation:
    def test_nan_fatal(self):
        X = np.array([[1.0, np.nan], [2.0, 3.0], [0.0, 1.0]])
        with pytest.raises(DataError):
            fit(ModelSpec("decision_tree", "regression"), X, np.zeros(3))

    def test_single_class_fatal(self):
        X = np.zeros((4, 2))
        with pytest.raises(DataError):
            fit(ModelSpec("logistic_regression", "classification"), X, np.ones(4))


class TestLogisticRegression:
    def test_separable_blobs_perfect(self):
        X, y = blobs(np.random.default_rng(0))
        model = fit(ModelSpec("logistic_regression", "classification"), X, y)
        assert (model.predict(X) == y).mean() == 1.0

    def test_zero_weights_score_half(self):
        from apppop.learners.linear import LogisticRegressionModel

        m = LogisticRegressionModel(epochs=0)
        m.fit(np.zeros((3, 2)), np.array([0.0, 1.0, 1.0]))
        assert np.allclose(m.predict_scores(np.array([[5.0, -3.0]])), 0.5)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(42)
        X = rng.normal(size=(12, 4))
        y = (rng.random(12) > 0.5).astype(float)
        wb = rng.normal(size=5)
        loss, grad = lr_loss_and_grad(wb, X, y, 0.01)
        num = np.zeros_like(wb)
        h = 1e-6
        for i in range(len(wb)):
            up, down = wb.copy(), wb.copy()
            up[i] += h
            down[i] -= h
            num[i] = (lr_loss_and_grad(up, X, y, 0.01)[0] - lr_loss_and_grad(down, X, y, 0.01)[0]) / (2 * h)
        rel = np.linalg.norm(grad - num) / max(np.linalg.norm(grad), np.linalg.norm(num))
        assert rel < 1e-6


class TestTrees:
    def test_constant_target_predicts_constant(self):
        X = np.random.default_rng(1).normal(size=(20, 3))
        y = np.full(20, 7.5)
        model = fit(ModelSpec("decision_tree", "regression"), X, y)
        assert np.allclose(model.predict(X), 7.5)

    def test_stump_piecewise_outputs(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0], [10.0], [11.0], [12.0], [13.0]])
        y = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])
        model = fit(ModelSpec("decision_tree", "classification", {"max_depth": 1}), X, y)
        assert model.predict_scores(np.array([[1.5]]))[0] == 0.0
        assert model.predict_scores(np.array([[11.0]]))[0] == 1.0

    def test_deterministic_tie_break(self):
        # two identical features: the split must pick feature 0
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        model = fit(ModelSpec("decision_tree", "classification", {"min_leaf": 2}), X, y)
        assert model.inner.root.feature == 0


class TestEnsembles:
    def test_rf_of_identical_trees_equals_one_tree(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0], [10.0], [11.0], [12.0], [13.0]] * 4)
        y = np.array([0.0] * 4 + [1.0] * 4, dtype=float).repeat(1)
        y = np.tile(np.array([0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]), 4)
        rf = fit(ModelSpec("random_forest", "classification", {"n_trees": 10, "max_depth": 1}), X, y)
        tree = fit(ModelSpec("decision_tree", "classification", {"max_depth": 1}), X, y)
        assert np.allclose(rf.predict_scores(X), tree.predict_scores(X))

    def test_gb_loss_monotone_nonincreasing(self):
        rng = np.random.default_rng(5)
        X, y = blobs(rng)
        gb = fit(ModelSpec("gradient_boosting", "classification", {"n_rounds": 80}), X, y)
        losses = gb.inner.train_loss
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))

    def test_gb_regression_fits_signal(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(80, 4))
        y = 3 * X[:, 0] - 2 * X[:, 1]
        gb = fit(ModelSpec("gradient_boosting", "regression", {"n_rounds": 100}), X, y)
        pred = gb.predict(X)
        assert np.corrcoef(pred, y)[0, 1] > 0.95

    def test_determinism_bit_identical(self):
        rng = np.random.default_rng(7)
        X, y = blobs(rng)
        a = fit(ModelSpec("random_forest", "classification", seed=3), X, y).predict_scores(X)
        b = fit(ModelSpec("random_forest", "classification", seed=3), X, y).predict_scores(X)
        assert np.array_equal(a, b)


class TestMLP:
    def test_xor_beats_lr(self):
        X, y = xor_data()
        mlp = fit(ModelSpec("mlp", "classification"), X, y)
        lr = fit(ModelSpec("logistic_regression", "classification"), X, y)
        assert (mlp.predict(X) == y).mean() >= 0.95
        assert (lr.predict(X) == y).mean() <= 0.6

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(10, 5))
        y = (rng.random(10) > 0.5).astype(float)
        flat = init_params(5, 8, rng)
        for task, target in (("classification", y), ("regression", rng.normal(size=10))):
            loss, grad = mlp_loss_and_grad(flat, X, target, 8, task)
            num = np.zeros_like(flat)
            h = 1e-6
            for i in range(len(flat)):
                up, down = flat.copy(), flat.copy()
                up[i] += h
                down[i] -= h
                num[i] = (mlp_loss_and_grad(up, X, target, 8, task)[0] - mlp_loss_and_grad(down, X, target, 8, task)[0]) / (2 * h)
            rel = np.linalg.norm(grad - num) / max(np.linalg.norm(grad), np.linalg.norm(num))
            assert rel < 1e-5


class TestRidgeLasso:
    def test_ridge_normal_equations(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(40, 6))
        y = rng.normal(size=40)
        w = ridge_solve(X, y, 1.0)
        resid = np.abs(X.T @ X @ w + w - X.T @ y).max()
        assert resid < 1e-8

    def test_lasso_zeroes_noise_features(self):
        rng = np.random.default_rng(12)
        X = rng.normal(size=(100, 6))
        y = 4 * X[:, 0] + 0.01 * rng.normal(size=100)
        model = fit(ModelSpec("lasso", "regression", {"l1": 0.5}), X, y)
        coefs = model.inner.coefficients()
        assert abs(coefs[0]) > 0.5
        assert np.all(np.abs(coefs[1:]) < 0.1)

    def test_ridge_predicts_linear_target(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(50, 3))
        y = X @ np.array([1.0, -2.0, 0.5]) + 3.0
        model = fit(ModelSpec("ridge", "regression"), X, y)
        assert np.abs(model.predict(X) - y).max() < 0.4


class TestPersistence:
    @pytest.mark.parametrize("family,task", [
        ("logistic_regression", "classification"),
        ("decision_tree", "classification"),
        ("random_forest", "classification"),
        ("gradient_boosting", "classification"),
        ("mlp", "classification"),
        ("lasso", "regression"),
        ("ridge", "regression"),
    ])
    def test_round_trip(self, tmp_path, family, task):
        rng = np.random.default_rng(21)
        X, y = blobs(rng, 40)
        if task == "regression":
            y = rng.normal(size=40)
        small = {"random_forest": {"n_trees": 5}, "gradient_boosting": {"n_rounds": 5}, "mlp": {"epochs": 5}}
        model = fit(ModelSpec(family, task, small.get(family, {})), X, y)
        path = tmp_path / "model.json"
        model.save(path)
        loaded = load_model(path)
        assert np.allclose(loaded.predict_scores(X), model.predict_scores(X))
        assert json.loads(path.read_text())["format_version"] == 1

    def test_schema_mismatch_rejected(self):
        X, y = blobs(np.random.default_rng(2), 20)
        model = fit(ModelSpec("logistic_regression", "classification"), X, y, schema=["a", "b", "c"])
        with pytest.raises(DataError):
            model.predict_scores(X, schema=["a", "b", "z"])


class TestSmote:
    def test_balanced_input_unchanged(self):
        X = np.arange(8, dtype=float).reshape(4, 2)
        y = np.array([0, 0, 1, 1])
        X_aug, y_aug, _, result = oversample_training(X, y, seed=1)
        assert np.array_equal(X_aug, X) and np.array_equal(y_aug, y)
        assert len(result.synthetic) == 0

    def test_two_minority_points_on_segment(self):
        X_min = np.array([[0.0, 0.0], [1.0, 1.0]])
        X_maj = np.random.default_rng(0).normal(8, 1, (4, 2))
        result = smote(X_min, X_maj, k=5, seed=2)
        assert result.synthetic.shape == (2, 2)
        for (i, nn, u), s in zip(result.provenance, result.synthetic):
            recon = (1 - u) * X_min[i] + u * X_min[nn]
            assert np.abs(recon - s).max() < 1e-9
            assert 0.0 <= u < 1.0

    def test_k_clamped(self):
        X_min = np.zeros((3, 2))
        X_min[1] = 1
        X_min[2] = 2
        result = smote(X_min, np.full((7, 2), 9.0), k=5, seed=3)
        assert result.k_used == 2

    def test_single_minority_errors(self):
        with pytest.raises(DataError):
            smote(np.zeros((1, 2)), np.ones((3, 2)), seed=0)

    def test_balances_counts(self):
        rng = np.random.default_rng(4)
        X = np.vstack([rng.normal(0, 1, (3, 4)), rng.normal(5, 1, (9, 4))])
        y = np.array([1] * 3 + [0] * 9)
        X_aug, y_aug, _, _ = oversample_training(X, y, seed=5)
        values, counts = np.unique(y_aug, return_counts=True)
        assert counts[0] == counts[1] == 9

    def test_convex_hull_membership(self):
        rng = np.random.default_rng(6)
        X_min = rng.normal(size=(5, 3))
        result = smote(X_min, rng.normal(10, 1, (20, 3)), k=3, seed=7)
        lo = X_min.min(axis=0) - 1e-9
        hi = X_min.max(axis=0) + 1e-9
        assert np.all(result.synthetic >= lo) and np.all(result.synthetic <= hi)

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        X_min = rng.normal(size=(4, 2))
        X_maj = rng.normal(size=(10, 2))
        a = smote(X_min, X_maj, seed=9)
        b = smote(X_min, X_maj, seed=9)
        assert np.array_equal(a.synthetic, b.synthetic) and a.provenance == b.provenance
