"""Pipeline stages behind the CLI subcommands.

Each stage reads only declared inputs and writes only declared outputs
under the configured output directory:

    extract  -> features.csv, system_metrics.csv, smells.csv, corpus_skips.csv,
                apps/<pkg>/classes.csv + methods.csv, cache/
    label    -> labels.csv, label_thresholds.json
    select   -> selection.json
    train    -> models/*.json, train_manifest.json
    evaluate -> report.json
    report   -> report.csv, report.txt
"""

from __future__ import annotations

import csv
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .errors import DataError
from .evaluate import EvalReport, loocv, trim_outliers, write_report_json
from .features import (
    FeatureMatrix,
    FeatureVector,
    aggregate_app,
    build_schema,
    matrix_from_vectors,
    normal_class_filter,
    read_features_csv,
    write_features_csv,
)
from .ingest import AppSnapshot, SkipRecord, app_loc, count_activities, filter_corpus, load_corpus, write_skip_report
from .javasrc import build_graph, parse_unit, resolve
from .javasrc.graphs import dump_graph_csv
from .javasrc.model import StructuralModel
from .labeling import LabelSet, build_labels, kendall_tau, read_labels_csv, write_labels_csv, write_thresholds_json
from .learners import ModelSpec, fit
from .metrics.code import all_class_rows, all_method_rows, write_rows_csv
from .metrics.system import SystemMetrics, compute_system_metrics
from .selection import handpicked, run_all_selectors, size_only, vote, write_selection_json
from .smells import SMELL_NAMES, SmellReport, detect_smells, write_smells_csv


@dataclass
class AppExtract:
    package: str
    content_hash: str
    skip_reason: str = ""
    features: dict | None = None
    system: dict | None = None
    smells: dict | None = None


def _hash_app_dir(snapshot: AppSnapshot, config_hash: str) -> str:
    h = hashlib.sha256()
    h.update(config_hash.encode())
    roots = [snapshot.manifest_path] if snapshot.manifest_path.is_file() else []
    app_json = snapshot.manifest_path.parent / "app.json"
    if app_json.is_file():
        roots.append(app_json)
    files = sorted(p for p in snapshot.source_root.rglob("*") if p.is_file())
    for path in roots + files:
        h.update(str(path.name).encode())
        try:
            h.update(path.read_bytes())
        except OSError:
            h.update(b"<unreadable>")
    return h.hexdigest()


def build_model_for_app(snapshot: AppSnapshot) -> tuple[StructuralModel, int, int]:
    """Parse every .java file under the app; returns (model, parsed, failed)."""
    model = StructuralModel()
    java_files = sorted(snapshot.source_root.rglob("*.java"))
    failed = 0
    for path in java_files:
        rel = path.relative_to(snapshot.source_root).as_posix()
        unit = parse_unit(path, rel_path=rel)
        model.units.append(unit)
        if unit.error is not None:
            failed += 1
        else:
            model.classes.extend(unit.classes)
    return model, len(java_files) - failed, failed


def extract_app(snapshot: AppSnapshot, config: RunConfig, dumps_dir: Path | None = None) -> AppExtract:
    """Full single-app extraction: parse -> metrics -> smells -> aggregate."""
    content_hash = _hash_app_dir(snapshot, config.config_hash())
    result = AppExtract(package=snapshot.package_name, content_hash=content_hash)
    model, parsed, failed = build_model_for_app(snapshot)
    total = parsed + failed
    if total == 0:
        result.skip_reason = "no_java_files"
        return result
    if failed / total > config.max_unparsed_fraction:
        result.skip_reason = f"unparseable_fraction>{config.max_unparsed_fraction:g}"
        return result
    resolve(model)
    class_graph = build_graph(model, "class")
    file_graph = build_graph(model, "file")
    package_graph = build_graph(model, "package")
    class_rows = all_class_rows(model)
    keep, reason = normal_class_filter(class_rows, config.filters.min_normal_classes)
    if not keep:
        result.skip_reason = reason
        return result
    method_rows = all_method_rows(model)
    system = compute_system_metrics(model, file_graph, class_graph, package_graph)
    smells = detect_smells(model, class_graph, config.smell_thresholds)
    if not snapshot.manifest_path.is_file():
        result.skip_reason = "missing_manifest"
        return result
    meta = {
        "app_loc": app_loc(snapshot.source_root),
        "activity_count": count_activities(snapshot.manifest_path),
        "contains_ads": snapshot.contains_ads,
        "genre": snapshot.genre,
        "permissions": snapshot.permissions,
    }
    vector = aggregate_app(
        snapshot.package_name, class_rows, method_rows, system, smells, meta,
        genres=config.genres, permission_vocab=config.permissions,
    )
    result.features = vector.values
    result.system = system.as_dict()
    result.smells = dict(smells.counts)
    if dumps_dir is not None:
        app_dir = dumps_dir / snapshot.package_name
        app_dir.mkdir(parents=True, exist_ok=True)
        write_rows_csv(app_dir / "classes.csv", class_rows)
        write_rows_csv(app_dir / "methods.csv", method_rows)
        if config.dump_graphs:
            for g, name in ((class_graph, "class"), (file_graph, "file"), (package_graph, "package")):
                dump_graph_csv(g, app_dir / f"graph_{name}.csv")
    return result


def _extract_worker(args) -> AppExtract:
    app_dir, config_doc, dumps_dir = args
    from .config import load_config
    from .ingest import load_snapshot

    config = load_config(None, config_doc)
    snapshot = load_snapshot(Path(app_dir))
    return extract_app(snapshot, config, Path(dumps_dir) if dumps_dir else None)


def cmd_extract(config: RunConfig) -> FeatureMatrix:
    out = config.out_path
    out.mkdir(parents=True, exist_ok=True)
    cache_dir = out / "cache"
    cache_dir.mkdir(exist_ok=True)
    apps_dir = out / "apps"
    chash = config.config_hash()

    manifest = load_corpus(Path(config.corpus_root))
    manifest = filter_corpus(manifest, config.filters)
    skips = list(manifest.skips)

    extracts: dict[str, AppExtract] = {}
    todo: list[AppSnapshot] = []
    for snap in manifest.apps:
        cache_file = cache_dir / f"{snap.package_name}.json"
        content_hash = _hash_app_dir(snap, chash)
        if cache_file.is_file():
            doc = json.loads(cache_file.read_text(encoding="utf-8"))
            if doc.get("content_hash") == content_hash:
                extracts[snap.package_name] = AppExtract(**doc)
                continue
        todo.append(snap)

    if config.jobs > 1 and len(todo) > 1:
        config_doc = config.to_json_dict()
        args = [(str(s.manifest_path.parent), config_doc, str(apps_dir)) for s in todo]
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for extract in pool.map(_extract_worker, args):
                extracts[extract.package] = extract
    else:
        for snap in todo:
            extracts[snap.package_name] = extract_app(snap, config, apps_dir)

    for package, extract in extracts.items():
        cache_file = cache_dir / f"{package}.json"
        doc = {
            "package": extract.package,
            "content_hash": extract.content_hash,
            "skip_reason": extract.skip_reason,
            "features": extract.features,
            "system": extract.system,
            "smells": extract.smells,
        }
        cache_file.write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")

    vectors: list[FeatureVector] = []
    system_rows: list[tuple[str, SystemMetrics]] = []
    smell_rows: list[tuple[str, SmellReport]] = []
    for package in sorted(extracts):
        extract = extracts[package]
        if extract.skip_reason:
            skips.append(SkipRecord(package, extract.skip_reason))
            continue
        vectors.append(FeatureVector(package, dict(extract.features)))
        system_rows.append((package, SystemMetrics(**extract.system)))
        report = SmellReport()
        report.counts.update(extract.smells)
        smell_rows.append((package, report))

    schema = build_schema(config.genres, config.permissions)
    matrix = matrix_from_vectors(schema, vectors, provenance={"config": chash})
    write_features_csv(out / "features.csv", matrix, config_hash=chash)
    from .metrics.system import write_system_metrics_csv

    write_system_metrics_csv(out / "system_metrics.csv", system_rows)
    write_smells_csv(out / "smells.csv", smell_rows, config.smell_thresholds)
    write_skip_report(out / "corpus_skips.csv", skips)
    return matrix


def _require(path: Path, producer: str) -> Path:
    if not path.is_file():
        raise DataError(f"missing artifact {path.name}: run `apppop {producer}` first")
    return path


def cmd_label(config: RunConfig) -> list[LabelSet]:
    out = config.out_path
    features_path = _require(out / "features.csv", "extract")
    matrix = read_features_csv(features_path)
    keep_ids = set(matrix.app_ids())
    manifest = load_corpus(Path(config.corpus_root))
    apps = [a for a in manifest.apps if a.package_name in keep_ids]
    labels, excluded = build_labels(
        apps,
        rating_rule=config.rating_rule,
        rating_threshold=config.rating_threshold,
        dpy_rule=config.dpy_rule,
        dpy_threshold=config.dpy_threshold,
    )
    write_labels_csv(out / "labels.csv", labels, config_hash=config.config_hash())
    extras: dict = {"excluded": [list(e) for e in excluded]}
    if len(apps) >= 2:
        ages = [a.age_years for a in apps]
        installs = [float(a.install_count) for a in apps]
        try:
            extras["kendall_tau_age_vs_installs"] = kendall_tau(ages, installs)
        except DataError:
            extras["kendall_tau_age_vs_installs"] = None
    write_thresholds_json(out / "label_thresholds.json", labels, extras)
    return labels


def _aligned(matrix: FeatureMatrix, labels: list[LabelSet]) -> tuple[FeatureMatrix, list[LabelSet]]:
    by_id = {l.app_id: l for l in labels}
    rows = [r for r in matrix.rows if r.app_id in by_id]
    aligned_labels = [by_id[r.app_id] for r in rows]
    sub = FeatureMatrix(schema=matrix.schema, rows=rows, provenance=matrix.provenance)
    return sub, aligned_labels


def _target_vector(labels: list[LabelSet], task: str, target: str, dpy_log: bool) -> np.ndarray:
    if task == "classification":
        if target == "rating":
            return np.array([float(l.popular_by_rating) for l in labels])
        return np.array([float(l.popular_by_dpy) for l in labels])
    if target == "rating":
        return np.array([l.avg_rating for l in labels])
    values = np.array([l.downloads_per_year for l in labels])
    return np.log1p(values) if dpy_log else values


def cmd_select(config: RunConfig) -> dict:
    out = config.out_path
    matrix = read_features_csv(_require(out / "features.csv", "extract"))
    labels = read_labels_csv(_require(out / "labels.csv", "label"))
    matrix, labels = _aligned(matrix, labels)
    if not labels:
        raise DataError("no labeled apps: cannot select features")
    doc: dict = {"config": config.config_hash(), "top_n": config.selection_top_n, "selections": {}}
    for task in config.tasks:
        for target in config.targets:
            y = _target_vector(labels, task, target, config.dpy_log)
            entry: dict = {}
            if "size" in config.feature_sets:
                entry["size"] = size_only(matrix)
            if "handpicked" in config.feature_sets:
                entry["handpicked"] = handpicked(matrix)
            if "voting" in config.feature_sets:
                results = run_all_selectors(matrix, y, task, n=config.selection_top_n, seed=config.seed)
                voted = vote(results)
                entry["voting"] = {
                    "selected": voted.selected,
                    "votes": voted.votes,
                    "quorum": voted.quorum,
                    "per_selector": voted.per_selector,
                }
            doc["selections"][f"{task}:{target}"] = entry
    write_selection_json(out / "selection.json", doc)
    return doc


def _feature_set_columns(selection_doc: dict, task: str, target: str, feature_set: str) -> list[str]:
    entry = selection_doc["selections"].get(f"{task}:{target}", {})
    if feature_set not in entry:
        raise DataError(f"feature set {feature_set!r} for {task}:{target} not in selection.json: run `apppop select`")
    if feature_set == "voting":
        return list(entry["voting"]["selected"])
    return list(entry[feature_set])


def _families(config: RunConfig, task: str) -> tuple[str, ...]:
    return config.classifiers if task == "classification" else config.regressors


def _model_key(task: str, target: str, feature_set: str, family: str) -> str:
    return f"{task}_{target}_{feature_set}_{family}"


def cmd_train(config: RunConfig) -> list[dict]:
    out = config.out_path
    matrix = read_features_csv(_require(out / "features.csv", "extract"))
    labels = read_labels_csv(_require(out / "labels.csv", "label"))
    selection_doc = json.loads(_require(out / "selection.json", "select").read_text(encoding="utf-8"))
    matrix, labels = _aligned(matrix, labels)
    models_dir = out / "models"
    models_dir.mkdir(exist_ok=True)
    manifest = []
    for task in config.tasks:
        for target in config.targets:
            y = _target_vector(labels, task, target, config.dpy_log)
            for feature_set in config.feature_sets:
                columns = _feature_set_columns(selection_doc, task, target, feature_set)
                if not columns:
                    continue
                X = np.array([[row.values[c] for c in columns] for row in matrix.rows])
                for family in _families(config, task):
                    spec = ModelSpec(family, task, dict(config.hyperparameters.get(family, {})), seed=config.seed)
                    model = fit(spec, X, y, schema=columns)
                    key = _model_key(task, target, feature_set, family)
                    model.save(models_dir / f"{key}.json")
                    manifest.append(
                        {
                            "key": key,
                            "task": task,
                            "target": target,
                            "feature_set": feature_set,
                            "family": family,
                            "n_features": len(columns),
                        }
                    )
    (out / "train_manifest.json").write_text(
        json.dumps({"config": config.config_hash(), "models": manifest}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return manifest


def cmd_evaluate(config: RunConfig) -> list[EvalReport]:
    out = config.out_path
    matrix = read_features_csv(_require(out / "features.csv", "extract"))
    labels = read_labels_csv(_require(out / "labels.csv", "label"))
    selection_doc = json.loads(_require(out / "selection.json", "select").read_text(encoding="utf-8"))
    manifest_doc = json.loads(_require(out / "train_manifest.json", "train").read_text(encoding="utf-8"))
    matrix, labels = _aligned(matrix, labels)
    reports: list[EvalReport] = []
    for entry in manifest_doc["models"]:
        task, target, feature_set, family = entry["task"], entry["target"], entry["feature_set"], entry["family"]
        columns = _feature_set_columns(selection_doc, task, target, feature_set)
        rows = matrix.rows
        y = _target_vector(labels, task, target, config.dpy_log)
        app_ids = [r.app_id for r in rows]
        if task == "regression" and config.trim_outliers:
            kept, _dropped = trim_outliers(app_ids, y.tolist(), k=config.trim_outliers_k)
            keep_set = set(kept)
            mask = [i for i, a in enumerate(app_ids) if a in keep_set]
            rows = [rows[i] for i in mask]
            y = y[mask]
            app_ids = [app_ids[i] for i in mask]
        X = np.array([[row.values[c] for c in columns] for row in rows])
        spec = ModelSpec(family, task, dict(config.hyperparameters.get(family, {})), seed=config.seed)
        report = loocv(
            X,
            y,
            app_ids,
            spec,
            feature_names=columns,
            smote=config.smote and task == "classification",
            smote_k=config.smote_k,
            seed=config.seed,
            feature_set=feature_set,
            target=target,
            threshold=config.classification_threshold,
        )
        reports.append(report)
    write_report_json(out / "report.json", reports, config_hash=config.config_hash())
    return reports


_SUMMARY_METRICS = {
    "classification": ("f1_popular", "f1_unpopular", "precision_popular", "recall_popular", "auc", "mcc"),
    "regression": ("rmse", "mae", "r2"),
}


def cmd_report(config: RunConfig) -> str:
    out = config.out_path
    doc = json.loads(_require(out / "report.json", "evaluate").read_text(encoding="utf-8"))
    rows = []
    for rep in doc["reports"]:
        metrics = rep["metrics"]
        row = {
            "task": rep["task"],
            "target": rep["target"],
            "feature_set": rep["feature_set"],
            "family": rep["family"],
            "n": rep["n_instances"],
            "folds": rep["n_folds_evaluated"],
        }
        for name in _SUMMARY_METRICS[rep["task"]]:
            row[name] = metrics.get(name)
        rows.append(row)
    rows.sort(key=lambda r: (r["task"], r["target"], r["feature_set"], r["family"]))
    headers = ["task", "target", "feature_set", "family", "n", "folds"] + sorted(
        {k for r in rows for k in r if k not in ("task", "target", "feature_set", "family", "n", "folds")}
    )
    with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# config={doc.get('config', '')}\n")
        writer = csv.writer(fh)
        writer.writerow(headers)
        for r in rows:
            writer.writerow([_fmt(r.get(h)) for h in headers])
    lines = ["\t".join(headers)]
    for r in rows:
        lines.append("\t".join(_fmt(r.get(h)) for h in headers))
    text = "\n".join(lines) + "\n"
    (out / "report.txt").write_text(text, encoding="utf-8")
    return text


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)
