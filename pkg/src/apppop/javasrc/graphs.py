"""Typed dependency graphs at class, file, and package granularity.

The class graph is primary; file and package graphs are projections of it
with self-edges removed.
"""

from __future__ import annotations

import csv
from pathlib import Path

from ..errors import DataError
from .model import DependencyGraph, StructuralModel

EDGE_KINDS = ("inherit", "invoke", "reference")


def _class_edges(model: StructuralModel) -> list[tuple[str, str, str]]:
    edges: set[tuple[str, str, str]] = set()
    for cls in model.classes:
        u = cls.qualified_name
        inherit_targets = set(cls.resolved_interfaces)
        if cls.resolved_superclass:
            inherit_targets.add(cls.resolved_superclass)
        for v in inherit_targets:
            if v != u:
                edges.add((u, v, "inherit"))
        invoke_targets = set()
        for meth in cls.methods:
            for callee in model.method_calls.get(meth.method_id, []):
                invoke_targets.add(callee[0])
        for v in invoke_targets:
            if v != u and v in model.resolution_index:
                edges.add((u, v, "invoke"))
        for v in cls.resolved_refs:
            if v == u or v not in model.resolution_index:
                continue
            if (u, v, "inherit") in edges or (u, v, "invoke") in edges:
                continue
            edges.add((u, v, "reference"))
    return sorted(edges)


def build_graph(model: StructuralModel, granularity: str) -> DependencyGraph:
    """Dependency graph at the requested granularity: u -> v means u depends on v."""
    if not model.resolved:
        raise DataError("model must be resolved before building graphs")
    class_edges = _class_edges(model)
    if granularity == "class":
        nodes = sorted(c.qualified_name for c in model.classes)
        return DependencyGraph("class", nodes, class_edges)
    if granularity == "file":
        mapping = {c.qualified_name: c.unit_path for c in model.classes}
        nodes = sorted(u.path for u in model.units if u.error is None)
    elif granularity == "package":
        mapping = {c.qualified_name: c.package for c in model.classes}
        nodes = sorted({u.package for u in model.units if u.error is None})
    else:
        raise DataError(f"unknown granularity {granularity!r}")
    projected: set[tuple[str, str, str]] = set()
    for u, v, kind in class_edges:
        pu, pv = mapping.get(u), mapping.get(v)
        if pu is None or pv is None or pu == pv:
            continue
        projected.add((pu, pv, kind))
    return DependencyGraph(granularity, nodes, sorted(projected))


def file_package_map(model: StructuralModel) -> dict[str, str]:
    return {u.path: u.package for u in model.units if u.error is None}


def dump_graph_csv(graph: DependencyGraph, path: Path) -> None:
    """Debug dump: edge list as ``from,to,kind``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["from", "to", "kind"])
        for u, v, kind in graph.edges:
            writer.writerow([u, v, kind])
