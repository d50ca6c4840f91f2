"""From-scratch learners behind a single spec-driven fit/predict surface.

Classification families: logistic_regression, decision_tree, random_forest,
gradient_boosting, mlp. Regression adds lasso and ridge in place of
logistic_regression. Gradient-based models standardize features using
training-data statistics; tree-based models run on raw features (monotone
per-feature transforms do not change their splits).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError, DataError
from .ensemble import GradientBoostingModel, RandomForestModel
from .linear import LassoModel, LogisticRegressionModel, RidgeModel, lr_loss_and_grad, ridge_solve
from .mlp import MLPModel, init_params, mlp_loss_and_grad
from .smote import SmoteResult, oversample_training, smote
from .tree import DecisionTreeModel

CLASSIFICATION_FAMILIES = ("logistic_regression", "decision_tree", "random_forest", "gradient_boosting", "mlp")
REGRESSION_FAMILIES = ("lasso", "ridge", "decision_tree", "random_forest", "gradient_boosting", "mlp")

DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "logistic_regression": {"l2": 1e-2, "epochs": 500, "lr": 0.1},
    "decision_tree": {"max_depth": 8, "min_leaf": 2},
    "random_forest": {"n_trees": 200, "max_depth": 8, "min_leaf": 2},
    "gradient_boosting": {"n_rounds": 200, "depth": 3, "shrinkage": 0.1},
    "mlp": {"hidden": 64, "lr": 1e-3, "epochs": 200, "batch": 16},
    "lasso": {"l1": 1e-2, "max_iter": 1000, "tol": 1e-10},
    "ridge": {"l2": 1.0},
}

_STANDARDIZED_FAMILIES = frozenset(("logistic_regression", "mlp", "lasso", "ridge"))

MODEL_FORMAT_VERSION = 1


@dataclass
class ModelSpec:
    family: str
    task: str  # classification | regression
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        valid = CLASSIFICATION_FAMILIES if self.task == "classification" else REGRESSION_FAMILIES
        if self.task not in ("classification", "regression"):
            raise ConfigError(f"unknown task {self.task!r}")
        if self.family not in valid:
            raise ConfigError(f"family {self.family!r} not available for {self.task}")
        merged = dict(DEFAULT_HYPERPARAMETERS[self.family])
        unknown = set(self.hyperparameters) - set(merged)
        if unknown:
            raise ConfigError(f"unknown hyperparameters for {self.family}: {sorted(unknown)}")
        merged.update(self.hyperparameters)
        self.hyperparameters = merged
        self._validate()

    def _validate(self):
        hp = self.hyperparameters
        positive = {"epochs", "lr", "max_depth", "min_leaf", "n_trees", "n_rounds", "depth", "shrinkage", "hidden", "batch", "max_iter"}
        for key, value in hp.items():
            if key in positive and value <= 0:
                raise ConfigError(f"{self.family}.{key} must be > 0, got {value}")
            if key in ("l1", "l2") and value < 0:
                raise ConfigError(f"{self.family}.{key} must be >= 0, got {value}")


def _build_model(spec: ModelSpec):
    hp = spec.hyperparameters
    fam = spec.family
    if fam == "logistic_regression":
        return LogisticRegressionModel(l2=hp["l2"], epochs=hp["epochs"], lr=hp["lr"])
    if fam == "decision_tree":
        return DecisionTreeModel(spec.task, max_depth=hp["max_depth"], min_leaf=hp["min_leaf"])
    if fam == "random_forest":
        return RandomForestModel(spec.task, n_trees=hp["n_trees"], max_depth=hp["max_depth"], min_leaf=hp["min_leaf"], seed=spec.seed)
    if fam == "gradient_boosting":
        return GradientBoostingModel(spec.task, n_rounds=hp["n_rounds"], depth=hp["depth"], shrinkage=hp["shrinkage"], seed=spec.seed)
    if fam == "mlp":
        return MLPModel(spec.task, hidden=hp["hidden"], lr=hp["lr"], epochs=hp["epochs"], batch=hp["batch"], seed=spec.seed)
    if fam == "lasso":
        return LassoModel(l1=hp["l1"], max_iter=hp["max_iter"], tol=hp["tol"])
    if fam == "ridge":
        return RidgeModel(l2=hp["l2"])
    raise ConfigError(f"unknown family {fam!r}")


@dataclass
class TrainedModel:
    spec: ModelSpec
    schema: list[str]
    mean: np.ndarray
    sd: np.ndarray
    inner: object

    def _transform(self, X: np.ndarray) -> np.ndarray:
        if self.spec.family in _STANDARDIZED_FAMILIES:
            return (X - self.mean) / self.sd
        return X

    def predict_scores(self, X: np.ndarray, schema: list[str] | None = None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if schema is not None and list(schema) != list(self.schema):
            raise DataError("schema mismatch: model was trained on different features")
        if X.shape[1] != len(self.schema):
            raise DataError(f"expected {len(self.schema)} features, got {X.shape[1]}")
        return self.inner.predict_scores(self._transform(X))

    def predict(self, X: np.ndarray, schema: list[str] | None = None, threshold: float = 0.5) -> np.ndarray:
        scores = self.predict_scores(X, schema)
        if self.spec.task == "classification":
            return (scores >= threshold).astype(int)
        return scores

    def to_json_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "family": self.spec.family,
            "task": self.spec.task,
            "hyperparameters": self.spec.hyperparameters,
            "seed": self.spec.seed,
            "schema": list(self.schema),
            "standardization": {"mean": self.mean.tolist(), "sd": self.sd.tolist()},
            "parameters": self.inner.params(),
        }

    def save(self, path: Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: Path) -> TrainedModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise DataError(f"unsupported model format in {path}")
    spec = ModelSpec(doc["family"], doc["task"], doc["hyperparameters"], doc["seed"])
    inner = _build_model(spec)
    inner.load_params(doc["parameters"])
    return TrainedModel(
        spec=spec,
        schema=doc["schema"],
        mean=np.asarray(doc["standardization"]["mean"], dtype=float),
        sd=np.asarray(doc["standardization"]["sd"], dtype=float),
        inner=inner,
    )


def fit(spec: ModelSpec, X: np.ndarray, y: np.ndarray, schema: list[str] | None = None) -> TrainedModel:
    """Train one model; deterministic for a fixed (spec, data)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(X) != len(y):
        raise DataError("X must be 2-D with one target per row")
    if not np.isfinite(X).all() or not np.isfinite(y).all():
        raise DataError("non-finite values in training data")
    if spec.task == "classification":
        classes = np.unique(y)
        if len(classes) < 2:
            raise DataError("single-class training data: cannot fit a classifier")
        if not set(classes.tolist()) <= {0.0, 1.0}:
            raise DataError("classification targets must be 0/1")
    schema = list(schema) if schema is not None else [f"f{i}" for i in range(X.shape[1])]
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd == 0, 1.0, sd)
    inner = _build_model(spec)
    if spec.family in _STANDARDIZED_FAMILIES:
        inner.fit((X - mean) / sd, y)
    else:
        inner.fit(X, y)
    return TrainedModel(spec=spec, schema=schema, mean=mean, sd=sd, inner=inner)


__all__ = [
    "CLASSIFICATION_FAMILIES",
    "REGRESSION_FAMILIES",
    "DEFAULT_HYPERPARAMETERS",
    "ModelSpec",
    "TrainedModel",
    "fit",
    "load_model",
    "smote",
    "SmoteResult",
    "oversample_training",
    "lr_loss_and_grad",
    "mlp_loss_and_grad",
    "init_params",
    "ridge_solve",
    "DecisionTreeModel",
    "RandomForestModel",
    "GradientBoostingModel",
    "LogisticRegressionModel",
    "LassoModel",
    "RidgeModel",
    "MLPModel",
]
