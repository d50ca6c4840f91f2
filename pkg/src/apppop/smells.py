"""Threshold/graph-based code smell detection (12-smell subset).

Thresholds follow common Designite documentation values and are fully
configurable; the active values are recorded in the CSV output header.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .javasrc.model import ClassKind, DependencyGraph, StructuralModel
from .metrics.code import all_class_rows, cyclomatic
from .metrics.system import strongly_connected_components

SMELL_NAMES = (
    "LongMethod",
    "ComplexMethod",
    "LongParameterList",
    "LongStatement",
    "LongIdentifier",
    "MagicNumber",
    "EmptyCatchClause",
    "MissingDefault",
    "CyclicDependency",
    "InsufficientModularization",
    "GodComponent",
    "DeepHierarchy",
)


@dataclass
class SmellConfig:
    long_method_loc: int = 100
    complex_method_cc: int = 8
    long_param_list: int = 5
    long_statement_chars: int = 120
    long_identifier_chars: int = 30
    magic_number_whitelist: tuple[float, ...] = (-1.0, 0.0, 1.0, 2.0)
    insufficient_modularization_loc: int = 1000
    insufficient_modularization_public_methods: int = 30
    insufficient_modularization_wmc: int = 100
    god_component_loc: int = 27000
    god_component_classes: int = 30
    deep_hierarchy_dit: int = 6

    def validate(self) -> None:
        for name, value in asdict(self).items():
            if name == "magic_number_whitelist":
                continue
            if value <= 0:
                raise ValueError(f"smell threshold {name} must be > 0, got {value}")


@dataclass
class SmellReport:
    counts: dict[str, int] = field(default_factory=lambda: {name: 0 for name in SMELL_NAMES})

    def __getitem__(self, name: str) -> int:
        return self.counts[name]


def detect_smells(model: StructuralModel, class_graph: DependencyGraph, cfg: SmellConfig | None = None) -> SmellReport:
    cfg = cfg or SmellConfig()
    cfg.validate()
    report = SmellReport()
    counts = report.counts
    whitelist = set(cfg.magic_number_whitelist)

    for cls in model.classes:
        for m in cls.methods:
            if m.loc > cfg.long_method_loc:
                counts["LongMethod"] += 1
            if cyclomatic(m) > cfg.complex_method_cc:
                counts["ComplexMethod"] += 1
            if m.arity > cfg.long_param_list:
                counts["LongParameterList"] += 1
            counts["EmptyCatchClause"] += m.stats.empty_catch_count
            counts["MissingDefault"] += m.stats.missing_default_count
            for value in m.stats.number_literal_values:
                if not math.isnan(value) and value not in whitelist:
                    counts["MagicNumber"] += 1
        for f in cls.fields:
            if f.is_final:
                continue  # named-constant initializers are the accepted idiom
            for value in f.init_number_values:
                if not math.isnan(value) and value not in whitelist:
                    counts["MagicNumber"] += 1

    for unit in model.units:
        if unit.error is not None:
            continue
        counts["LongStatement"] += sum(1 for ln in unit.code_line_lengths if ln > cfg.long_statement_chars)
        counts["LongIdentifier"] += sum(1 for ident in unit.identifiers if len(ident) > cfg.long_identifier_chars)

    sccs = strongly_connected_components(sorted(class_graph.nodes), class_graph.edge_pairs())
    counts["CyclicDependency"] = sum(1 for comp in sccs if len(comp) >= 2)

    class_rows = all_class_rows(model)
    for row in class_rows:
        if (
            row.loc > cfg.insufficient_modularization_loc
            or row.public_methods_qty > cfg.insufficient_modularization_public_methods
            or row.wmc > cfg.insufficient_modularization_wmc
        ):
            counts["InsufficientModularization"] += 1
        if row.kind != ClassKind.ANONYMOUS.value and row.dit > cfg.deep_hierarchy_dit:
            counts["DeepHierarchy"] += 1

    pkg_loc: dict[str, int] = {}
    pkg_classes: dict[str, int] = {}
    for unit in model.units:
        if unit.error is None:
            pkg_loc[unit.package] = pkg_loc.get(unit.package, 0) + unit.code_line_count
    for cls in model.classes:
        if cls.kind != ClassKind.ANONYMOUS:
            pkg_classes[cls.package] = pkg_classes.get(cls.package, 0) + 1
    for pkg in sorted(set(pkg_loc) | set(pkg_classes)):
        if pkg_loc.get(pkg, 0) > cfg.god_component_loc or pkg_classes.get(pkg, 0) > cfg.god_component_classes:
            counts["GodComponent"] += 1

    return report


def write_smells_csv(path: Path, rows: list[tuple[str, SmellReport]], cfg: SmellConfig) -> None:
    """smells.csv with a leading comment row carrying the active thresholds."""
    threshold_note = ";".join(f"{k}={v}" for k, v in sorted(asdict(cfg).items()))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# thresholds: {threshold_note}\n")
        writer = csv.writer(fh)
        writer.writerow(["app_id"] + list(SMELL_NAMES))
        for app_id, report in rows:
            writer.writerow([app_id] + [report.counts[name] for name in SMELL_NAMES])
