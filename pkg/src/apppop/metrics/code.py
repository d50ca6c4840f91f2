"""Class-level and method-level code metrics.

Class rows cover every parsed class (all kinds); method rows cover declared
non-constructor methods. Class WMC sums cyclomatic complexity over all
declared methods including constructors, mirroring the usual asymmetry
between class and method views.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path

from ..javasrc.model import ClassInfo, ClassKind, MethodInfo, StructuralModel

MODIFIER_BITS = {
    "public": 1,
    "private": 2,
    "protected": 4,
    "static": 8,
    "final": 16,
    "abstract": 32,
    "synchronized": 64,
    "native": 128,
    "default": 256,
}


def modifiers_code(mods: set[str]) -> int:
    """Documented bitmask; kept out of aggregation (non-ordinal)."""
    return sum(bit for name, bit in MODIFIER_BITS.items() if name in mods)


def cyclomatic(method: MethodInfo) -> int:
    """McCabe complexity: 1 + decision points.

    Counts if, loop constructs (a do-while counts once), case labels, catch
    clauses, &&, ||, and ternaries. Bodyless methods are defined as 1.
    """
    s = method.stats
    return 1 + s.if_count + s.loop_count + s.case_count + s.catch_count + s.logical_op_count + s.ternary_count


def readability(mean_line_len: float, max_nesting: int, cc: int, mean_ident_len: float) -> float:
    """Logistic readability proxy in (0,1), strictly decreasing in each driver.

    z = 0.05*(mean_line_len-45) + 0.4*(max_nesting-2)
        + 0.3*(log2(1+cc)-1) + 0.05*(mean_ident_len-10)
    r = 1 / (1 + exp(z))
    """
    z = (
        0.05 * (mean_line_len - 45.0)
        + 0.4 * (max_nesting - 2.0)
        + 0.3 * (math.log2(1.0 + cc) - 1.0)
        + 0.05 * (mean_ident_len - 10.0)
    )
    z = max(-60.0, min(60.0, z))
    return 1.0 / (1.0 + math.exp(z))


def _method_readability(method: MethodInfo) -> float:
    s = method.stats
    mean_line = sum(s.line_lengths) / len(s.line_lengths) if s.line_lengths else 45.0
    mean_ident = sum(s.identifier_lengths) / len(s.identifier_lengths) if s.identifier_lengths else 10.0
    return readability(mean_line, s.max_nesting, cyclomatic(method), mean_ident)


@dataclass
class ClassMetricsRow:
    qualified_name: str
    kind: str
    cbo: int
    wmc: int
    dit: int
    noc: int
    rfc: int
    lcom: int
    total_methods_qty: int
    static_methods_qty: int
    public_methods_qty: int
    private_methods_qty: int
    protected_methods_qty: int
    default_methods_qty: int
    visible_methods_qty: int
    abstract_methods_qty: int
    final_methods_qty: int
    total_fields_qty: int
    protected_fields_qty: int
    default_fields_qty: int
    final_fields_qty: int
    nosi: int
    loc: int
    return_qty: int
    loop_qty: int
    comparisons_qty: int
    try_catch_qty: int
    parenthesized_qty: int
    string_literals_qty: int
    numbers_qty: int
    assignments_qty: int
    math_ops_qty: int
    variables_qty: int
    max_nested_blocks: int
    anonymous_classes_qty: int
    inner_classes_qty: int
    lambdas_qty: int
    unique_words_qty: int
    modifiers_code: int
    log_statements_qty: int


@dataclass
class MethodMetricsRow:
    method_id: str  # qualified class + name/arity
    class_name: str
    name: str
    fan_in: int
    fan_out: int
    loc: int
    return_qty: int
    variables_qty: int
    parameters_qty: int
    methods_invoked_qty: int
    methods_invoked_local_qty: int
    methods_invoked_indirect_local_qty: int
    loop_qty: int
    comparisons_qty: int
    try_catch_qty: int
    parenthesized_qty: int
    assignments_qty: int
    math_ops_qty: int
    max_nested_blocks: int
    lambdas_qty: int
    unique_words_qty: int
    modifiers_code: int
    log_statements_qty: int
    wmc: int
    readability: float


def lcom_value(uses: list[set]) -> int:
    """Classic pairwise LCOM: max(0, pairs sharing no field - pairs sharing one).

    ``uses`` holds, per non-constructor method, the set of own-class fields
    it touches.
    """
    no_share = share = 0
    for i in range(len(uses)):
        for j in range(i + 1, len(uses)):
            if uses[i] & uses[j]:
                share += 1
            else:
                no_share += 1
    return max(0, no_share - share)


def compute_dit(model: StructuralModel, cls: ClassInfo, _memo: dict | None = None) -> int:
    """1 for a root; internal superclasses add their own depth, anything
    unresolved adds exactly one level."""
    memo = _memo if _memo is not None else {}
    seen = set()
    def rec(c: ClassInfo) -> int:
        if c.qualified_name in memo:
            return memo[c.qualified_name]
        if c.qualified_name in seen:
            return 1  # inheritance cycle guard
        seen.add(c.qualified_name)
        if not c.superclass_name:
            d = 1
        else:
            parent = model.resolution_index.get(c.resolved_superclass or "")
            d = 1 + (rec(parent) if parent is not None else 1)
        memo[c.qualified_name] = d
        return d
    return rec(cls)


def _noc_index(model: StructuralModel) -> dict[str, int]:
    counts: dict[str, int] = {}
    for cls in model.classes:
        if cls.kind == ClassKind.ANONYMOUS:
            continue
        sup = cls.resolved_superclass
        if sup:
            counts[sup] = counts.get(sup, 0) + 1
    return counts


def class_metrics(model: StructuralModel, cls: ClassInfo, noc_index: dict[str, int] | None = None) -> ClassMetricsRow:
    if noc_index is None:
        noc_index = _noc_index(model)
    methods = cls.methods
    plain = [m for m in methods if not m.is_constructor]

    invoke_targets = set()
    for m in methods:
        for callee in model.method_calls.get(m.method_id, []):
            invoke_targets.add(callee[0])
    cbo_set = (set(cls.resolved_refs) | invoke_targets) - {cls.qualified_name}
    cbo_set = {q for q in cbo_set if q in model.resolution_index}

    distinct_invoked = {(inv.name, inv.arg_count) for m in methods for inv in m.invocations}

    field_names = {f.name for f in cls.fields}
    lcom = lcom_value([m.used_idents & field_names for m in plain])

    def mod_count(name: str) -> int:
        return sum(1 for m in methods if name in m.modifiers)

    default_methods = sum(
        1 for m in methods if not ({"public", "private", "protected"} & m.modifiers)
    )
    stats = [m.stats for m in methods]
    return ClassMetricsRow(
        qualified_name=cls.qualified_name,
        kind=cls.kind.value,
        cbo=len(cbo_set),
        wmc=sum(cyclomatic(m) for m in methods),
        dit=compute_dit(model, cls),
        noc=noc_index.get(cls.qualified_name, 0),
        rfc=len(methods) + len(distinct_invoked),
        lcom=lcom,
        total_methods_qty=len(methods),
        static_methods_qty=mod_count("static"),
        public_methods_qty=mod_count("public"),
        private_methods_qty=mod_count("private"),
        protected_methods_qty=mod_count("protected"),
        default_methods_qty=default_methods,
        visible_methods_qty=len(methods) - mod_count("private"),
        abstract_methods_qty=sum(1 for m in methods if "abstract" in m.modifiers or not m.has_body),
        final_methods_qty=mod_count("final"),
        total_fields_qty=len(cls.fields),
        protected_fields_qty=sum(1 for f in cls.fields if "protected" in f.modifiers),
        default_fields_qty=sum(1 for f in cls.fields if not ({"public", "private", "protected"} & f.modifiers)),
        final_fields_qty=sum(1 for f in cls.fields if f.is_final),
        nosi=model.static_invocation_counts.get(cls.qualified_name, 0),
        loc=cls.loc,
        return_qty=sum(s.return_count for s in stats),
        loop_qty=sum(s.loop_count for s in stats),
        comparisons_qty=sum(s.comparison_count for s in stats),
        try_catch_qty=sum(s.try_catch_count for s in stats),
        parenthesized_qty=sum(s.parenthesized_expr_count for s in stats),
        string_literals_qty=sum(s.string_literal_count for s in stats),
        numbers_qty=sum(s.number_literal_count for s in stats),
        assignments_qty=sum(s.assignment_count for s in stats),
        math_ops_qty=sum(s.math_op_count for s in stats),
        variables_qty=sum(s.variable_decl_count for s in stats),
        max_nested_blocks=max((s.max_nesting for s in stats), default=0),
        anonymous_classes_qty=sum(
            1 for c in model.classes if c.kind == ClassKind.ANONYMOUS and c.enclosing == cls.qualified_name
        ),
        inner_classes_qty=sum(
            1
            for c in model.classes
            if c.kind == ClassKind.INNER and c.enclosing == cls.qualified_name and c.declared_with_class_keyword
        ),
        lambdas_qty=sum(s.lambda_count for s in stats),
        unique_words_qty=cls.unique_word_count,
        modifiers_code=modifiers_code(cls.modifiers),
        log_statements_qty=sum(s.log_statement_count for s in stats),
    )


def method_metrics(model: StructuralModel, cls: ClassInfo, method: MethodInfo) -> MethodMetricsRow:
    """Metrics row for one non-constructor method."""
    mid = method.method_id
    callers = {c for c in model.method_callers.get(mid, set()) if c != mid}
    callees = {c for c in model.method_calls.get(mid, []) if c != mid}
    local_direct = {c for c in callees if c[0] == cls.qualified_name}

    # transitive same-class closure from the direct local callees
    local_edges: dict[tuple, set] = {}
    for m in cls.methods:
        local_edges[m.method_id] = {
            c for c in model.method_calls.get(m.method_id, []) if c[0] == cls.qualified_name
        }
    reachable: set = set()
    frontier = set(local_direct)
    while frontier:
        nxt = set()
        for node in frontier:
            for succ in local_edges.get(node, ()):
                if succ not in reachable and succ not in local_direct:
                    nxt.add(succ)
        reachable |= nxt
        frontier = nxt
    indirect_local = reachable - local_direct - {mid}

    s = method.stats
    return MethodMetricsRow(
        method_id=f"{cls.qualified_name}#{method.name}/{method.arity}",
        class_name=cls.qualified_name,
        name=method.name,
        fan_in=len(callers),
        fan_out=len(callees),
        loc=method.loc,
        return_qty=s.return_count,
        variables_qty=s.variable_decl_count,
        parameters_qty=method.arity,
        methods_invoked_qty=len({(inv.name, inv.arg_count) for inv in method.invocations}),
        methods_invoked_local_qty=len(local_direct),
        methods_invoked_indirect_local_qty=len(indirect_local),
        loop_qty=s.loop_count,
        comparisons_qty=s.comparison_count,
        try_catch_qty=s.try_catch_count,
        parenthesized_qty=s.parenthesized_expr_count,
        assignments_qty=s.assignment_count,
        math_ops_qty=s.math_op_count,
        max_nested_blocks=s.max_nesting,
        lambdas_qty=s.lambda_count,
        unique_words_qty=s.unique_word_count,
        modifiers_code=modifiers_code(method.modifiers),
        log_statements_qty=s.log_statement_count,
        wmc=cyclomatic(method),
        readability=_method_readability(method),
    )


def all_class_rows(model: StructuralModel) -> list[ClassMetricsRow]:
    noc = _noc_index(model)
    return [class_metrics(model, cls, noc) for cls in model.classes]


def all_method_rows(model: StructuralModel) -> list[MethodMetricsRow]:
    rows = []
    for cls in model.classes:
        for m in cls.methods:
            if not m.is_constructor:
                rows.append(method_metrics(model, cls, m))
    return rows


def write_rows_csv(path: Path, rows: list) -> None:
    """Dump dataclass rows with stable column order."""
    if not rows:
        Path(path).write_text("", encoding="utf-8")
        return
    names = [f.name for f in dc_fields(rows[0])]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in rows:
            writer.writerow([getattr(row, n) for n in names])
