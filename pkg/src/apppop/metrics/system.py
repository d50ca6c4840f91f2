"""System-level architecture metrics over the file dependency graph.

Propagation cost is exact (transitive-closure density, reflexive pairs
included). Decoupling and independence levels are documented simplified
variants: the reference tool's clustering algorithms are proprietary, so we
use SCC-based module structure while preserving each metric's direction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path

from ..errors import DataError
from ..javasrc.model import ClassInfo, DependencyGraph, StructuralModel


def strongly_connected_components(nodes: list[str], edges: set[tuple[str, str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative, deterministic for sorted input."""
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for u, v in sorted(edges):
        if u in adj and v in adj:
            adj[u].append(v)
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = 0
    for root in sorted(nodes):
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(adj[succ])))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(sorted(comp))
    return sccs


def _closure_pair_count(nodes: list[str], edges: set[tuple[str, str]]) -> int:
    """Reachable (i,j) pairs including i==j, via bitset Floyd-Warshall."""
    n = len(nodes)
    idx = {name: k for k, name in enumerate(nodes)}
    rows = [1 << k for k in range(n)]
    for u, v in edges:
        if u in idx and v in idx:
            rows[idx[u]] |= 1 << idx[v]
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return sum(row.bit_count() for row in rows)


def propagation_cost(graph: DependencyGraph) -> float:
    """Transitive-closure density: reachable pairs (reflexive included) / N^2."""
    n = len(graph.nodes)
    if n == 0:
        raise DataError("empty system: propagation cost undefined")
    return _closure_pair_count(sorted(graph.nodes), graph.edge_pairs()) / (n * n)


def cliques(graph: DependencyGraph) -> tuple[int, int, list[list[str]]]:
    """SCCs of size >= 2: (count, member file count, members)."""
    comps = [c for c in strongly_connected_components(sorted(graph.nodes), graph.edge_pairs()) if len(c) >= 2]
    comps.sort()
    return len(comps), sum(len(c) for c in comps), comps


def decoupling_level(graph: DependencyGraph) -> float:
    """Sum over SCC modules m of (|m|/N) * g(|m|), where g rewards modules no
    larger than t = max(1, ceil(0.05*N)) and decays as t/|m| beyond."""
    n = len(graph.nodes)
    if n == 0:
        raise DataError("empty system: decoupling level undefined")
    t = max(1, math.ceil(0.05 * n))
    total = 0.0
    for comp in strongly_connected_components(sorted(graph.nodes), graph.edge_pairs()):
        s = len(comp)
        g = 1.0 if s <= t else t / s
        total += (s / n) * g
    return total


def independence_level(graph: DependencyGraph) -> float:
    """Share of files no other file depends on (zero incoming edges)."""
    n = len(graph.nodes)
    if n == 0:
        raise DataError("empty system: independence level undefined")
    has_incoming = {v for _, v in graph.edge_pairs()}
    return sum(1 for node in graph.nodes if node not in has_incoming) / n


def _isolated_nodes(graph: DependencyGraph) -> set[str]:
    touched = set()
    for u, v in graph.edge_pairs():
        touched.add(u)
        touched.add(v)
    return {n for n in graph.nodes if n not in touched}


def _subgraph(graph: DependencyGraph, keep: set[str]) -> DependencyGraph:
    return DependencyGraph(
        graph.granularity,
        sorted(n for n in graph.nodes if n in keep),
        [(u, v, k) for u, v, k in graph.edges if u in keep and v in keep],
    )


def unhealthy_inheritance(model: StructuralModel, class_graph: DependencyGraph) -> tuple[int, int, set[str]]:
    """Inheritance anti-pattern instances.

    One instance per internal (parent, child) pair where the parent depends
    on its own direct subtype, plus one per (client, parent) pair where an
    outside class depends on both the parent and at least one of its
    children. Returns (count, file_count, files).
    """
    children: dict[str, list[str]] = {}
    for cls in model.classes:
        parents = list(cls.resolved_interfaces)
        if cls.resolved_superclass:
            parents.append(cls.resolved_superclass)
        for p in parents:
            children.setdefault(p, []).append(cls.qualified_name)
    pairs = class_graph.edge_pairs()
    file_of = {c.qualified_name: c.unit_path for c in model.classes}
    count = 0
    files: set[str] = set()
    for parent in sorted(children):
        if parent not in file_of:
            continue
        kids = sorted(set(children[parent]))
        for child in kids:
            if (parent, child) in pairs:
                count += 1
                files.add(file_of[parent])
                files.add(file_of[child])
        family = {parent, *kids}
        for client in sorted(file_of):
            if client in family:
                continue
            if (client, parent) not in pairs:
                continue
            touched = [c for c in kids if (client, c) in pairs]
            if touched:
                count += 1
                files.add(file_of[client])
                files.add(file_of[parent])
                files.update(file_of[c] for c in touched)
    return count, len(files), files


def package_cycles(package_graph: DependencyGraph, file_to_package: dict[str, str]) -> tuple[int, int, set[str]]:
    """(cycle count, files inside cyclic packages, those files)."""
    comps = [
        c
        for c in strongly_connected_components(sorted(package_graph.nodes), package_graph.edge_pairs())
        if len(c) >= 2
    ]
    cyclic_packages = {p for comp in comps for p in comp}
    files = {f for f, p in file_to_package.items() if p in cyclic_packages}
    return len(comps), len(files), files


@dataclass
class SystemMetrics:
    num_files: int
    propagation_cost: float
    propagation_cost_excl_isolated: float
    isolated_file_count: int
    decoupling_level: float
    decoupling_level_excl_isolated: float
    independence_level: float
    clique_count: int
    clique_file_count: int
    unhealthy_inheritance_count: int
    unhealthy_inheritance_file_count: int
    package_cycle_count: int
    package_cycle_file_count: int
    total_antipattern_count: int
    total_antipattern_files: int

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in dc_fields(self)}


def compute_system_metrics(
    model: StructuralModel,
    file_graph: DependencyGraph,
    class_graph: DependencyGraph,
    package_graph: DependencyGraph,
) -> SystemMetrics:
    n = len(file_graph.nodes)
    if n == 0:
        raise DataError("empty system: no parsed files")
    pc = propagation_cost(file_graph)
    dl = decoupling_level(file_graph)
    il = independence_level(file_graph)
    isolated = _isolated_nodes(file_graph)
    connected = set(file_graph.nodes) - isolated
    if connected:
        sub = _subgraph(file_graph, connected)
        pc_excl = propagation_cost(sub)
        dl_excl = decoupling_level(sub)
    else:
        pc_excl = 0.0  # every file isolated: nothing propagates
        dl_excl = 1.0
    clique_count, clique_files, clique_members = cliques(file_graph)
    ui_count, ui_files, ui_file_set = unhealthy_inheritance(model, class_graph)
    fmap = {c.unit_path: c.package for c in model.classes}
    for unit in model.units:
        if unit.error is None:
            fmap.setdefault(unit.path, unit.package)
    pc_count, pc_files, pc_file_set = package_cycles(package_graph, fmap)
    clique_file_set = {f for comp in clique_members for f in comp}
    all_files = clique_file_set | ui_file_set | pc_file_set
    return SystemMetrics(
        num_files=n,
        propagation_cost=pc,
        propagation_cost_excl_isolated=pc_excl,
        isolated_file_count=len(isolated),
        decoupling_level=dl,
        decoupling_level_excl_isolated=dl_excl,
        independence_level=il,
        clique_count=clique_count,
        clique_file_count=clique_files,
        unhealthy_inheritance_count=ui_count,
        unhealthy_inheritance_file_count=ui_files,
        package_cycle_count=pc_count,
        package_cycle_file_count=pc_files,
        total_antipattern_count=clique_count + ui_count + pc_count,
        total_antipattern_files=len(all_files & set(file_graph.nodes)) if all_files else 0,
    )


def write_system_metrics_csv(path: Path, rows: list[tuple[str, SystemMetrics]]) -> None:
    names = [f.name for f in dc_fields(SystemMetrics)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["app_id"] + names)
        for app_id, sm in rows:
            writer.writerow([app_id] + [getattr(sm, n) for n in names])
