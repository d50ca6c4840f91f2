"""Corpus ingestion: app snapshots, corpus filters, metadata normalization.

An app snapshot lives in one directory holding an ``app.json`` metadata file,
an ``AndroidManifest.xml``, and the app's source tree. Snapshots replace any
live store scraping; the loader only consumes what is already on disk.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import math
import urllib.error
import urllib.request
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError, FormatError, TransportError

DAYS_PER_YEAR = 365.25

# Extensions that count toward the language mix when computing the Java share.
SOURCE_EXTENSIONS = {".java", ".kt", ".c", ".cpp", ".cs", ".js", ".py"}

# Permission vocabulary shipped as the config default (16 categories).
PERMISSION_VOCAB = (
    "Location",
    "Phone",
    "Photos/Media/Files",
    "Storage",
    "Wi-Fi connection information",
    "Device ID & call information",
    "Other",
    "Uncategorized",
    "Camera",
    "Microphone",
    "Identity",
    "Calendar",
    "Contacts",
    "Device & app history",
    "SMS",
    "Wearable sensors/Activity data",
)

GENRE_VOCAB = (
    "ART_AND_DESIGN",
    "AUTO_AND_VEHICLES",
    "BOOKS_AND_REFERENCE",
    "BUSINESS",
    "COMICS",
    "COMMUNICATION",
    "DATING",
    "EDUCATION",
    "ENTERTAINMENT",
    "EVENTS",
    "FINANCE",
    "FOOD_AND_DRINK",
    "GAME_ACTION",
    "GAME_ADVENTURE",
    "GAME_ARCADE",
    "GAME_BOARD",
    "GAME_CARD",
    "GAME_CASINO",
    "GAME_CASUAL",
    "GAME_EDUCATIONAL",
    "GAME_PUZZLE",
    "GAME_RACING",
    "GAME_ROLE_PLAYING",
    "GAME_SIMULATION",
    "GAME_SPORTS",
    "GAME_STRATEGY",
    "GAME_TRIVIA",
    "GAME_WORD",
    "HEALTH_AND_FITNESS",
    "HOUSE_AND_HOME",
    "LIBRARIES_AND_DEMO",
    "LIFESTYLE",
    "MAPS_AND_NAVIGATION",
    "MEDICAL",
    "MUSIC_AND_AUDIO",
    "NEWS_AND_MAGAZINES",
    "PARENTING",
    "PERSONALIZATION",
    "PHOTOGRAPHY",
    "PRODUCTIVITY",
    "SHOPPING",
    "SOCIAL",
    "SPORTS",
    "TOOLS",
    "TRAVEL_AND_LOCAL",
    "VIDEO_PLAYERS",
    "WEATHER",
)


@dataclass(frozen=True)
class Review:
    stars: int
    text: str | None = None
    app_version: str | None = None


@dataclass
class AppSnapshot:
    package_name: str
    source_root: Path
    manifest_path: Path
    genre: str
    contains_ads: bool
    permissions: list[str]
    release_date: dt.date
    install_count: int
    reviews: list[Review]
    snapshot_date: dt.date

    @property
    def age_years(self) -> float:
        return (self.snapshot_date - self.release_date).days / DAYS_PER_YEAR

    def to_json_dict(self) -> dict:
        """Serialize back to the on-disk app.json schema."""
        return {
            "package_name": self.package_name,
            "genre": self.genre,
            "contains_ads": self.contains_ads,
            "permissions": list(self.permissions),
            "release_date": self.release_date.isoformat(),
            "snapshot_date": self.snapshot_date.isoformat(),
            "install_count": self.install_count,
            "reviews": [
                {
                    k: v
                    for k, v in (
                        ("stars", r.stars),
                        ("text", r.text),
                        ("app_version", r.app_version),
                    )
                    if v is not None
                }
                for r in self.reviews
            ],
        }


@dataclass(frozen=True)
class SkipRecord:
    package_name: str  # directory name when the package could not be read
    reason: str


@dataclass
class FilterConfig:
    java_fraction_min: float = 0.5
    min_age_years: float = 1.0
    min_normal_classes: int = 5  # enforced later, after class extraction


@dataclass
class CorpusManifest:
    apps: list[AppSnapshot] = field(default_factory=list)
    skips: list[SkipRecord] = field(default_factory=list)
    filters_applied: FilterConfig | None = None


def _strip_comments_java_like(line: str, in_block: bool) -> tuple[str, bool]:
    """Remove //, /* */ comment content from one line; returns (code, in_block)."""
    out = []
    i = 0
    n = len(line)
    in_str: str | None = None
    while i < n:
        ch = line[i]
        if in_block:
            if ch == "*" and i + 1 < n and line[i + 1] == "/":
                in_block = False
                i += 2
                continue
            i += 1
            continue
        if in_str is not None:
            out.append(ch)
            if ch == "\\" and i + 1 < n:
                out.append(line[i + 1])
                i += 2
                continue
            if ch == in_str:
                in_str = None
            i += 1
            continue
        if ch in "\"'":
            in_str = ch
            out.append(ch)
            i += 1
            continue
        if ch == "/" and i + 1 < n:
            nxt = line[i + 1]
            if nxt == "/":
                break
            if nxt == "*":
                in_block = True
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out), in_block


def count_code_lines(path: Path) -> int:
    """Nonblank, noncomment line count for a single source file.

    Java-family comment syntax for .java/.kt/.c/.cpp/.cs/.js, hash comments
    for .py. Comment markers inside string literals are handled for the
    Java family; exotic cases (text blocks spanning comments) may miscount.
    """
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError:
        return 0
    count = 0
    if path.suffix == ".py":
        for line in text.splitlines():
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                count += 1
        return count
    in_block = False
    for line in text.splitlines():
        code, in_block = _strip_comments_java_like(line, in_block)
        if code.strip():
            count += 1
    return count


def count_source_lines(source_root: Path) -> dict[str, int]:
    """Per-extension nonblank noncomment LOC over the recognized languages."""
    totals: dict[str, int] = {ext: 0 for ext in SOURCE_EXTENSIONS}
    for path in sorted(source_root.rglob("*")):
        if path.is_file() and path.suffix in SOURCE_EXTENSIONS:
            totals[path.suffix] += count_code_lines(path)
    return totals


def java_fraction(source_root: Path) -> float:
    """Share of Java LOC among all recognized source LOC; 0.0 when empty."""
    totals = count_source_lines(source_root)
    denom = sum(totals.values())
    if denom == 0:
        return 0.0
    return totals[".java"] / denom


def app_loc(source_root: Path) -> int:
    """CLOC-style project size: nonblank noncomment lines over all languages."""
    return sum(count_source_lines(source_root).values())


def _parse_date(value, field_name: str) -> dt.date:
    if not isinstance(value, str):
        raise ValueError(f"{field_name} must be a YYYY-MM-DD string")
    return dt.date.fromisoformat(value)


def _parse_reviews(raw) -> list[Review]:
    if not isinstance(raw, list):
        raise ValueError("reviews must be a list")
    reviews = []
    for entry in raw:
        stars = entry.get("stars")
        if not isinstance(stars, int) or stars < 1 or stars > 5:
            raise ValueError(f"review stars must be an integer in [1,5], got {stars!r}")
        reviews.append(Review(stars=stars, text=entry.get("text"), app_version=entry.get("app_version")))
    return reviews


def load_snapshot(app_dir: Path) -> AppSnapshot:
    """Load and validate one app directory; raises ValueError on bad metadata."""
    meta_path = app_dir / "app.json"
    if not meta_path.is_file():
        raise ValueError("missing app.json")
    raw = json.loads(meta_path.read_text(encoding="utf-8"))
    package_name = raw.get("package_name")
    if not package_name or not isinstance(package_name, str):
        raise ValueError("package_name missing or empty")
    install_count = raw.get("install_count")
    if not isinstance(install_count, int) or install_count < 0:
        raise ValueError(f"install_count must be a non-negative integer, got {install_count!r}")
    release_date = _parse_date(raw.get("release_date"), "release_date")
    snapshot_date = _parse_date(raw.get("snapshot_date"), "snapshot_date")
    if snapshot_date < release_date:
        raise ValueError("snapshot_date precedes release_date")
    permissions = raw.get("permissions", [])
    if not isinstance(permissions, list) or not all(isinstance(p, str) for p in permissions):
        raise ValueError("permissions must be a list of strings")
    genre = raw.get("genre", "")
    if not isinstance(genre, str):
        raise ValueError("genre must be a string")
    manifest_path = app_dir / "AndroidManifest.xml"
    source_root = app_dir / "src" if (app_dir / "src").is_dir() else app_dir
    return AppSnapshot(
        package_name=package_name,
        source_root=source_root,
        manifest_path=manifest_path,
        genre=genre,
        contains_ads=bool(raw.get("contains_ads", False)),
        permissions=[p.strip() for p in permissions],
        release_date=release_date,
        install_count=install_count,
        reviews=_parse_reviews(raw.get("reviews", [])),
        snapshot_date=snapshot_date,
    )


def load_corpus(root: Path) -> CorpusManifest:
    """Load every app directory under ``root`` into a manifest.

    Malformed entries become skip records rather than silent drops. Duplicate
    package names across directories are a corpus-level error.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"corpus root does not exist: {root}")
    manifest = CorpusManifest()
    seen: dict[str, Path] = {}
    for app_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        try:
            snap = load_snapshot(app_dir)
        except (ValueError, json.JSONDecodeError) as exc:
            manifest.skips.append(SkipRecord(app_dir.name, str(exc)))
            continue
        if snap.package_name in seen:
            raise DataError(
                f"duplicate package name {snap.package_name!r} in "
                f"{seen[snap.package_name]} and {app_dir}"
            )
        seen[snap.package_name] = app_dir
        manifest.apps.append(snap)
    return manifest


def filter_corpus(manifest: CorpusManifest, cfg: FilterConfig | None = None) -> CorpusManifest:
    """Retain apps meeting the Java-share and minimum-age thresholds.

    Exclusions are recorded per app with a reason; filtering is total and
    idempotent.
    """
    cfg = cfg or FilterConfig()
    kept: list[AppSnapshot] = []
    skips = list(manifest.skips)
    for snap in manifest.apps:
        if snap.age_years < cfg.min_age_years - 1e-12:
            skips.append(SkipRecord(snap.package_name, f"age<{cfg.min_age_years:g}y"))
            continue
        frac = java_fraction(snap.source_root)
        if frac < cfg.java_fraction_min - 1e-12:
            skips.append(SkipRecord(snap.package_name, f"java_fraction<{cfg.java_fraction_min:g}"))
            continue
        kept.append(snap)
    return CorpusManifest(apps=kept, skips=skips, filters_applied=cfg)


def count_activities(manifest_path: Path) -> int:
    """Number of <activity> elements under <application>; aliases excluded."""
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise DataError(f"manifest not found: {manifest_path}")
    try:
        tree = ET.parse(manifest_path)
    except ET.ParseError as exc:
        raise DataError(f"malformed AndroidManifest.xml: {exc}") from exc
    count = 0
    for application in tree.getroot().iter("application"):
        count += sum(1 for _ in application.iter("activity"))
    return count


def write_skip_report(path: Path, skips: list[SkipRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["package_name", "reason"])
        for rec in skips:
            writer.writerow([rec.package_name, rec.reason])


def fetch_fdroid_index(url: str, out: Path) -> list[dict]:
    """Fetch an F-Droid index-v2 style JSON document and persist it verbatim.

    Returns a summary: one entry per package with its source repository URL.
    HTTP failures raise TransportError (retryable); non-JSON bodies raise
    FormatError. Nothing is written unless the fetch succeeds.
    """
    try:
        with urllib.request.urlopen(url) as resp:
            body = resp.read()
    except (urllib.error.URLError, urllib.error.HTTPError) as exc:
        raise TransportError(f"fetch failed for {url}: {exc}") from exc
    try:
        doc = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"index body is not JSON: {exc}") from exc
    packages = doc.get("packages")
    if not isinstance(packages, dict):
        raise FormatError("index JSON lacks a 'packages' object")
    out = Path(out)
    out.write_bytes(body)
    summary = []
    for name in sorted(packages):
        entry = packages[name]
        source = ""
        if isinstance(entry, dict):
            meta = entry.get("metadata", entry)
            if isinstance(meta, dict):
                source = meta.get("sourceCode", "") or ""
        summary.append({"package_name": name, "source_repo": source})
    return summary


def age_years(release_date: dt.date, snapshot_date: dt.date) -> float:
    """Fractional age in years, days / 365.25."""
    days = (snapshot_date - release_date).days
    if days < 0:
        raise DataError("snapshot_date precedes release_date")
    return days / DAYS_PER_YEAR


def is_finite_number(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)
