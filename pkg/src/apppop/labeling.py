"""Popularity indicators and binary labels.

Average rating comes from raw review stars (not the store's displayed
rating); download counts are normalized by app age into DownloadsPerYear.
The Popular/Unpopular split defaults to a median rule with the threshold
persisted, since no fixed cutoffs are baked in.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .ingest import AppSnapshot, Review, age_years


@dataclass
class LabelSet:
    app_id: str
    avg_rating: float
    downloads_per_year: float
    age_years: float
    popular_by_rating: bool
    popular_by_dpy: bool
    thresholds_used: dict


def average_rating(reviews: list[Review]) -> float:
    if not reviews:
        raise DataError("no reviews: app must be excluded from rating labels")
    return sum(r.stars for r in reviews) / len(reviews)


def downloads_per_year(install_count: int, release_date: dt.date, snapshot_date: dt.date) -> float:
    age = age_years(release_date, snapshot_date)
    if age <= 0:
        raise DataError("app age is zero; downloads_per_year undefined")
    return install_count / age


def _median(values: list[float]) -> float:
    data = sorted(values)
    n = len(data)
    mid = n // 2
    if n % 2:
        return float(data[mid])
    return (data[mid - 1] + data[mid]) / 2.0


def binarize(values: list[float], rule: str = "median", threshold: float | None = None) -> tuple[list[bool], float]:
    """Popular iff value >= threshold.

    rule="fixed" uses the supplied threshold; rule="median" computes it from
    the corpus and refuses degenerate all-equal inputs.
    """
    if any(not math.isfinite(v) for v in values):
        raise DataError("non-finite label values")
    if rule == "fixed":
        if threshold is None:
            raise DataError("fixed binarization rule requires a threshold")
        theta = float(threshold)
    elif rule == "median":
        if not values:
            raise DataError("no values to binarize")
        if min(values) == max(values):
            raise DataError("degenerate split: all label values equal")
        theta = _median(values)
    else:
        raise DataError(f"unknown binarization rule {rule!r}")
    return [v >= theta for v in values], theta


def kendall_tau(x: list[float], y: list[float]) -> float:
    """Kendall tau-b with tie correction."""
    if len(x) != len(y) or len(x) < 2:
        raise DataError("kendall_tau needs two equal-length vectors, n >= 2")
    if min(x) == max(x) or min(y) == max(y):
        raise DataError("kendall_tau undefined for zero-variance input")
    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 and dy == 0:
                ties_x += 1
                ties_y += 1
            elif dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) / 2
    denom = math.sqrt((n0 - ties_x) * (n0 - ties_y))
    if denom == 0:
        raise DataError("kendall_tau undefined: all pairs tied")
    return (concordant - discordant) / denom


def build_labels(
    apps: list[AppSnapshot],
    rating_rule: str = "median",
    rating_threshold: float | None = None,
    dpy_rule: str = "median",
    dpy_threshold: float | None = None,
) -> tuple[list[LabelSet], list[tuple[str, str]]]:
    """Label every app with reviews; returns (labels, exclusions)."""
    excluded: list[tuple[str, str]] = []
    usable: list[AppSnapshot] = []
    for app in apps:
        if not app.reviews:
            excluded.append((app.package_name, "no_reviews"))
            continue
        usable.append(app)
    if not usable:
        return [], excluded
    ratings = [average_rating(a.reviews) for a in usable]
    dpys = [downloads_per_year(a.install_count, a.release_date, a.snapshot_date) for a in usable]
    rating_flags, rating_theta = binarize(ratings, rating_rule, rating_threshold)
    dpy_flags, dpy_theta = binarize(dpys, dpy_rule, dpy_threshold)
    thresholds = {
        "rating": {"rule": rating_rule, "threshold": rating_theta},
        "dpy": {"rule": dpy_rule, "threshold": dpy_theta},
    }
    labels = [
        LabelSet(
            app_id=a.package_name,
            avg_rating=r,
            downloads_per_year=d,
            age_years=a.age_years,
            popular_by_rating=fr,
            popular_by_dpy=fd,
            thresholds_used=thresholds,
        )
        for a, r, d, fr, fd in zip(usable, ratings, dpys, rating_flags, dpy_flags)
    ]
    labels.sort(key=lambda rec: rec.app_id)
    return labels, excluded


def write_labels_csv(path: Path, labels: list[LabelSet], config_hash: str = "") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if config_hash:
            fh.write(f"# config={config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["app_id", "avg_rating", "downloads_per_year", "age_years", "popular_by_rating", "popular_by_dpy"])
        for rec in labels:
            writer.writerow(
                [
                    rec.app_id,
                    repr(rec.avg_rating),
                    repr(rec.downloads_per_year),
                    repr(rec.age_years),
                    int(rec.popular_by_rating),
                    int(rec.popular_by_dpy),
                ]
            )


def write_thresholds_json(path: Path, labels: list[LabelSet], extras: dict | None = None) -> None:
    doc = dict(labels[0].thresholds_used) if labels else {}
    if extras:
        doc.update(extras)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_labels_csv(path: Path) -> list[LabelSet]:
    labels = []
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            fh.seek(0)
        reader = csv.DictReader(fh)
        for rec in reader:
            labels.append(
                LabelSet(
                    app_id=rec["app_id"],
                    avg_rating=float(rec["avg_rating"]),
                    downloads_per_year=float(rec["downloads_per_year"]),
                    age_years=float(rec["age_years"]),
                    popular_by_rating=rec["popular_by_rating"] == "1",
                    popular_by_dpy=rec["popular_by_dpy"] == "1",
                    thresholds_used={},
                )
            )
    return labels
