"""Command-line entry point.

Subcommands run the pipeline stage by stage; every stage is a pure function
of its declared inputs plus the config, so reruns produce byte-identical
artifacts. Exit codes: 0 ok, 1 config error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigError, DataError
from .ingest import fetch_fdroid_index


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apppop", description="App popularity prediction from internal software metrics")
    parser.add_argument("--config", help="path to a JSON run configuration")
    parser.add_argument("--corpus", help="corpus root directory (overrides config)")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--feature-set", choices=["size", "handpicked", "voting"], help="restrict to one feature set")
    parser.add_argument("--target", choices=["rating", "dpy"], help="restrict to one target")
    parser.add_argument("--task", choices=["classification", "regression"], help="restrict to one task")
    parser.add_argument("--seed", type=int, help="master random seed")
    parser.add_argument("--jobs", type=int, help="parallel workers for extraction")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("extract", "parse the corpus and write features.csv"),
        ("label", "compute popularity labels"),
        ("select", "run feature selection"),
        ("train", "fit models on the full matrix"),
        ("evaluate", "leave-one-out evaluation"),
        ("report", "render the summary table"),
        ("pipeline", "run every stage in order"),
    ):
        sub.add_parser(name, help=help_text)
    fetch = sub.add_parser("fetch-index", help="download an F-Droid package index")
    fetch.add_argument("--url", required=True)
    fetch.add_argument("--index-out", required=True, help="file to store the raw index")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    ov: dict = {}
    if args.corpus:
        ov["corpus_root"] = args.corpus
    if args.out:
        ov["out_dir"] = args.out
    if args.feature_set:
        ov["feature_sets"] = [args.feature_set]
    if args.target:
        ov["targets"] = [args.target]
    if args.task:
        ov["tasks"] = [args.task]
    if args.seed is not None:
        ov["seed"] = args.seed
    if args.jobs is not None:
        ov["jobs"] = args.jobs
    return ov


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    from . import pipeline

    try:
        if args.command == "fetch-index":
            summary = fetch_fdroid_index(args.url, Path(args.index_out))
            for entry in summary:
                print(f"{entry['package_name']}\t{entry['source_repo']}")
            print(f"{len(summary)} packages")
            return 0
        config = load_config(args.config, _overrides(args))
        if args.command == "extract":
            matrix = pipeline.cmd_extract(config)
            print(f"extracted {len(matrix.rows)} apps -> {config.out_path / 'features.csv'}")
        elif args.command == "label":
            labels = pipeline.cmd_label(config)
            print(f"labeled {len(labels)} apps -> {config.out_path / 'labels.csv'}")
        elif args.command == "select":
            doc = pipeline.cmd_select(config)
            print(f"selection written for {len(doc['selections'])} task:target pairs -> {config.out_path / 'selection.json'}")
        elif args.command == "train":
            manifest = pipeline.cmd_train(config)
            print(f"trained {len(manifest)} models -> {config.out_path / 'models'}")
        elif args.command == "evaluate":
            reports = pipeline.cmd_evaluate(config)
            print(f"evaluated {len(reports)} model configurations -> {config.out_path / 'report.json'}")
        elif args.command == "report":
            text = pipeline.cmd_report(config)
            print(text, end="")
        elif args.command == "pipeline":
            pipeline.cmd_extract(config)
            pipeline.cmd_label(config)
            pipeline.cmd_select(config)
            pipeline.cmd_train(config)
            pipeline.cmd_evaluate(config)
            text = pipeline.cmd_report(config)
            print(text, end="")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
