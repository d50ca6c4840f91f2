"""Fixed-length feature vectors per app.

Variable-size class/method metric rows collapse into min/max/mean plus 11
percentiles per metric; system metrics, smell counts, global totals, and
one-hot metadata complete the schema. Column order is deterministic:
metadata, system, smells, class aggregates, method aggregates, globals.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field, fields as dc_fields

from .errors import DataError
from .ingest import GENRE_VOCAB, PERMISSION_VOCAB
from .metrics.code import ClassMetricsRow, MethodMetricsRow
from .metrics.system import SystemMetrics
from .smells import SMELL_NAMES, SmellReport

PERCENTILE_LEVELS = (10, 20, 30, 40, 50, 60, 70, 80, 90, 95, 99)
AGG_NAMES = ("min", "max", "mean") + tuple(f"p{p}" for p in PERCENTILE_LEVELS)

CLASS_METRICS = tuple(
    f.name for f in dc_fields(ClassMetricsRow) if f.name not in ("qualified_name", "kind", "modifiers_code")
)
METHOD_METRICS = tuple(
    f.name
    for f in dc_fields(MethodMetricsRow)
    if f.name not in ("method_id", "class_name", "name", "modifiers_code")
)
SYSTEM_METRICS = tuple(f.name for f in dc_fields(SystemMetrics))

GLOBAL_TOTALS = (
    ("total_unique_words", "unique_words_qty"),
    ("total_lambdas", "lambdas_qty"),
    ("total_inner_classes", "inner_classes_qty"),
    ("total_anonymous_classes", "anonymous_classes_qty"),
    ("total_loops", "loop_qty"),
    ("total_loc", "loc"),
    ("total_methods", "total_methods_qty"),
)


def sanitize(label: str) -> str:
    return re.sub(r"[^0-9A-Za-z]+", "_", label).strip("_")


def percentiles(xs: list[float]) -> list[float]:
    """The 11 pipeline percentiles (10th..90th, 95th, 99th), linear interpolation."""
    if not xs:
        raise ValueError("percentiles of an empty population")
    data = sorted(xs)
    n = len(data)
    out = []
    for p in PERCENTILE_LEVELS:
        r = p / 100.0 * (n - 1)
        lo = math.floor(r)
        hi = math.ceil(r)
        v = data[lo] + (r - lo) * (data[hi] - data[lo])
        out.append(v)
    return out


def summarize(xs: list[float]) -> dict[str, float]:
    """min/max/mean plus the 11 percentiles, keyed by aggregate name."""
    if not xs:
        raise ValueError("summarize of an empty population")
    agg = {"min": float(min(xs)), "max": float(max(xs)), "mean": float(sum(xs) / len(xs))}
    for p, v in zip(PERCENTILE_LEVELS, percentiles(xs)):
        agg[f"p{p}"] = float(v)
    return agg


@dataclass
class FeatureVector:
    app_id: str
    values: dict[str, float]


@dataclass
class FeatureMatrix:
    schema: list[str]
    rows: list[FeatureVector] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def column(self, name: str) -> list[float]:
        if name not in self.schema:
            raise DataError(f"feature {name!r} not in schema")
        return [row.values[name] for row in self.rows]

    def app_ids(self) -> list[str]:
        return [row.app_id for row in self.rows]


def metadata_feature_names(genres: tuple[str, ...] = GENRE_VOCAB, permissions: tuple[str, ...] = PERMISSION_VOCAB) -> list[str]:
    names = ["app_loc", "activity_count", "contains_ads"]
    names += [f"genre_{sanitize(g)}" for g in genres] + ["genre__OTHER"]
    names += [f"perm_{sanitize(p)}" for p in permissions] + ["perm__OTHER"]
    return names


def build_schema(genres: tuple[str, ...] = GENRE_VOCAB, permissions: tuple[str, ...] = PERMISSION_VOCAB) -> list[str]:
    """The full deterministic feature schema for a config's vocabularies."""
    names = metadata_feature_names(genres, permissions)
    names += list(SYSTEM_METRICS)
    names += [f"smell_{s}" for s in SMELL_NAMES]
    for metric in CLASS_METRICS:
        names += [f"class_{metric}_{agg}" for agg in AGG_NAMES]
    for metric in METHOD_METRICS:
        names += [f"method_{metric}_{agg}" for agg in AGG_NAMES]
    names += [name for name, _ in GLOBAL_TOTALS]
    names += ["total_normal_classes", "class_population_present", "method_population_present"]
    return names


def encode_metadata(
    genre: str,
    permissions: list[str],
    genres: tuple[str, ...] = GENRE_VOCAB,
    permission_vocab: tuple[str, ...] = PERMISSION_VOCAB,
) -> dict[str, float]:
    """One-hot genre and multi-hot permissions; unknown labels go to _OTHER."""
    out: dict[str, float] = {}
    matched = False
    for g in genres:
        hit = genre == g
        out[f"genre_{sanitize(g)}"] = 1.0 if hit else 0.0
        matched = matched or hit
    out["genre__OTHER"] = 0.0 if matched else 1.0
    perm_set = set(permissions)
    known = set()
    for p in permission_vocab:
        hit = p in perm_set
        out[f"perm_{sanitize(p)}"] = 1.0 if hit else 0.0
        if hit:
            known.add(p)
    out["perm__OTHER"] = 1.0 if perm_set - known else 0.0
    return out


def normal_class_filter(class_rows: list[ClassMetricsRow], min_normal: int = 5) -> tuple[bool, str]:
    """Keep/drop rule: at least ``min_normal`` normal classes."""
    normal = sum(1 for r in class_rows if r.kind == "normal")
    if normal < min_normal:
        return False, f"normal_classes<{min_normal}"
    return True, ""


def aggregate_app(
    app_id: str,
    class_rows: list[ClassMetricsRow],
    method_rows: list[MethodMetricsRow],
    system: SystemMetrics,
    smells: SmellReport,
    meta: dict,
    genres: tuple[str, ...] = GENRE_VOCAB,
    permission_vocab: tuple[str, ...] = PERMISSION_VOCAB,
) -> FeatureVector:
    """One fixed-schema vector for one app.

    Class aggregates run over kind=normal classes only; global totals run
    over all class kinds; method aggregates cover the non-constructor rows.
    Empty populations encode as 0 plus a presence flag of 0.
    """
    values: dict[str, float] = {
        "app_loc": float(meta["app_loc"]),
        "activity_count": float(meta["activity_count"]),
        "contains_ads": 1.0 if meta["contains_ads"] else 0.0,
    }
    values.update(encode_metadata(meta.get("genre", ""), meta.get("permissions", []), genres, permission_vocab))
    for name, value in system.as_dict().items():
        values[name] = float(value)
    for name in SMELL_NAMES:
        values[f"smell_{name}"] = float(smells.counts[name])

    normal_rows = [r for r in class_rows if r.kind == "normal"]
    for metric in CLASS_METRICS:
        if normal_rows:
            agg = summarize([float(getattr(r, metric)) for r in normal_rows])
        else:
            agg = {name: 0.0 for name in AGG_NAMES}
        for agg_name in AGG_NAMES:
            values[f"class_{metric}_{agg_name}"] = agg[agg_name]
    for metric in METHOD_METRICS:
        if method_rows:
            agg = summarize([float(getattr(r, metric)) for r in method_rows])
        else:
            agg = {name: 0.0 for name in AGG_NAMES}
        for agg_name in AGG_NAMES:
            values[f"method_{metric}_{agg_name}"] = agg[agg_name]

    for feat_name, metric in GLOBAL_TOTALS:
        values[feat_name] = float(sum(getattr(r, metric) for r in class_rows))
    values["total_normal_classes"] = float(len(normal_rows))
    values["class_population_present"] = 1.0 if normal_rows else 0.0
    values["method_population_present"] = 1.0 if method_rows else 0.0

    for name, v in values.items():
        if not math.isfinite(v):
            raise DataError(f"non-finite feature {name}={v!r} for app {app_id}")
    return FeatureVector(app_id=app_id, values=values)


def matrix_from_vectors(schema: list[str], vectors: list[FeatureVector], provenance: dict | None = None) -> FeatureMatrix:
    rows = []
    for vec in sorted(vectors, key=lambda v: v.app_id):
        missing = [n for n in schema if n not in vec.values]
        extra = [n for n in vec.values if n not in schema]
        if missing or extra:
            raise DataError(f"schema mismatch for app {vec.app_id}: missing={missing[:3]} extra={extra[:3]}")
        rows.append(vec)
    ids = [r.app_id for r in rows]
    if len(set(ids)) != len(ids):
        raise DataError("duplicate app ids in feature matrix")
    return FeatureMatrix(schema=list(schema), rows=rows, provenance=provenance or {})


def _format_value(v: float) -> str:
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def write_features_csv(path, matrix: FeatureMatrix, config_hash: str = "") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if config_hash:
            fh.write(f"# config={config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["app_id"] + matrix.schema)
        for row in matrix.rows:
            writer.writerow([row.app_id] + [_format_value(row.values[n]) for n in matrix.schema])


def read_features_csv(path) -> FeatureMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            fh.seek(0)
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"empty features file: {path}") from None
        schema = header[1:]
        vectors = []
        for rec in reader:
            vectors.append(FeatureVector(rec[0], {n: float(v) for n, v in zip(schema, rec[1:])}))
    return matrix_from_vectors(schema, vectors)
