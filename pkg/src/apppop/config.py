"""Run configuration: one JSON file drives every pipeline stage.

The canonical-JSON hash of the effective config is stamped into every
artifact so reruns can prove they used identical settings.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .ingest import FilterConfig, GENRE_VOCAB, PERMISSION_VOCAB
from .learners import CLASSIFICATION_FAMILIES, REGRESSION_FAMILIES
from .smells import SmellConfig

FEATURE_SET_NAMES = ("size", "handpicked", "voting")
TARGET_NAMES = ("rating", "dpy")
TASK_NAMES = ("classification", "regression")


@dataclass
class RunConfig:
    corpus_root: str = "corpus"
    out_dir: str = "out"
    seed: int = 0
    jobs: int = 1
    filters: FilterConfig = field(default_factory=FilterConfig)
    smell_thresholds: SmellConfig = field(default_factory=SmellConfig)
    genres: tuple[str, ...] = GENRE_VOCAB
    permissions: tuple[str, ...] = PERMISSION_VOCAB
    rating_rule: str = "median"
    rating_threshold: float | None = None
    dpy_rule: str = "median"
    dpy_threshold: float | None = None
    dpy_log: bool = False
    selection_top_n: int = 25
    feature_sets: tuple[str, ...] = FEATURE_SET_NAMES
    targets: tuple[str, ...] = TARGET_NAMES
    tasks: tuple[str, ...] = ("classification",)
    classifiers: tuple[str, ...] = CLASSIFICATION_FAMILIES
    regressors: tuple[str, ...] = REGRESSION_FAMILIES
    hyperparameters: dict = field(default_factory=dict)  # family -> overrides
    smote: bool = True
    smote_k: int = 5
    classification_threshold: float = 0.5
    trim_outliers: bool = False
    trim_outliers_k: float = 1.5
    max_unparsed_fraction: float = 0.2
    dump_graphs: bool = False

    def validate(self) -> None:
        for fs in self.feature_sets:
            if fs not in FEATURE_SET_NAMES:
                raise ConfigError(f"unknown feature set {fs!r}")
        for t in self.targets:
            if t not in TARGET_NAMES:
                raise ConfigError(f"unknown target {t!r}")
        for t in self.tasks:
            if t not in TASK_NAMES:
                raise ConfigError(f"unknown task {t!r}")
        for fam in self.classifiers:
            if fam not in CLASSIFICATION_FAMILIES:
                raise ConfigError(f"unknown classifier family {fam!r}")
        for fam in self.regressors:
            if fam not in REGRESSION_FAMILIES:
                raise ConfigError(f"unknown regressor family {fam!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.rating_rule not in ("median", "fixed") or self.dpy_rule not in ("median", "fixed"):
            raise ConfigError("binarization rules must be 'median' or 'fixed'")
        if self.rating_rule == "fixed" and self.rating_threshold is None:
            raise ConfigError("rating_rule=fixed requires rating_threshold")
        if self.dpy_rule == "fixed" and self.dpy_threshold is None:
            raise ConfigError("dpy_rule=fixed requires dpy_threshold")
        try:
            self.smell_thresholds.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json_dict(self) -> dict:
        doc = dataclasses.asdict(self)
        doc["filters"] = dataclasses.asdict(self.filters)
        doc["smell_thresholds"] = dataclasses.asdict(self.smell_thresholds)
        for key in ("genres", "permissions", "feature_sets", "targets", "tasks", "classifiers", "regressors"):
            doc[key] = list(doc[key])
        doc["smell_thresholds"]["magic_number_whitelist"] = list(doc["smell_thresholds"]["magic_number_whitelist"])
        return doc

    def config_hash(self) -> str:
        doc = self.to_json_dict()
        doc.pop("out_dir", None)  # artifact location does not change results
        doc.pop("jobs", None)
        canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]

    @property
    def out_path(self) -> Path:
        return Path(self.out_dir)


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    """Build a config from an optional JSON file plus CLI overrides."""
    doc: dict = {}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        try:
            doc = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")
    if overrides:
        doc.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = dict(doc)
    if "filters" in kwargs:
        kwargs["filters"] = FilterConfig(**kwargs["filters"])
    if "smell_thresholds" in kwargs:
        st = dict(kwargs["smell_thresholds"])
        if "magic_number_whitelist" in st:
            st["magic_number_whitelist"] = tuple(float(v) for v in st["magic_number_whitelist"])
        kwargs["smell_thresholds"] = SmellConfig(**st)
    for key in ("genres", "permissions", "feature_sets", "targets", "tasks", "classifiers", "regressors"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    try:
        cfg = RunConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad config structure: {exc}") from exc
    cfg.validate()
    return cfg
