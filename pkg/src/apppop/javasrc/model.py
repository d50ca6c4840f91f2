"""Structural model of parsed Java source: units, classes, methods, graphs."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class ClassKind(str, enum.Enum):
    NORMAL = "normal"
    INNER = "inner"
    ANONYMOUS = "anonymous"
    INTERFACE = "interface"
    ENUM = "enum_decl"


@dataclass
class StatementStats:
    """Per-method body counters gathered during the token walk."""

    loop_count: int = 0
    comparison_count: int = 0
    try_catch_count: int = 0
    return_count: int = 0
    assignment_count: int = 0
    math_op_count: int = 0
    parenthesized_expr_count: int = 0
    string_literal_count: int = 0
    number_literal_count: int = 0
    variable_decl_count: int = 0
    max_nesting: int = 0
    lambda_count: int = 0
    unique_word_count: int = 0
    log_statement_count: int = 0
    line_lengths: list[int] = field(default_factory=list)
    identifier_lengths: list[int] = field(default_factory=list)
    # decision-point components for cyclomatic complexity
    if_count: int = 0
    case_count: int = 0
    catch_count: int = 0
    logical_op_count: int = 0
    ternary_count: int = 0
    # smell-specific extras
    empty_catch_count: int = 0
    missing_default_count: int = 0
    number_literal_values: list[float] = field(default_factory=list)


@dataclass
class Invocation:
    """One call site: ``receiver.name(args)`` with receiver best-effort.

    receiver is None for bare/this calls, "super" for super calls, "<expr>"
    when the receiver is a computed expression, otherwise the (possibly
    dotted) receiver text.
    """

    receiver: str | None
    name: str
    arg_count: int
    line: int


@dataclass
class MethodInfo:
    name: str
    is_constructor: bool
    parameters: list[tuple[str, str]]  # (name, raw type)
    modifiers: set[str]
    return_type: str | None
    stats: StatementStats
    invocations: list[Invocation]
    loc: int
    start_line: int
    end_line: int
    has_body: bool
    used_idents: set[str] = field(default_factory=set)
    local_var_types: dict[str, str] = field(default_factory=dict)
    declaring_class: str = ""

    @property
    def arity(self) -> int:
        return len(self.parameters)

    @property
    def method_id(self) -> tuple[str, str, int]:
        return (self.declaring_class, self.name, self.arity)


@dataclass
class FieldInfo:
    name: str
    raw_type: str
    modifiers: set[str]
    init_number_values: list[float] = field(default_factory=list)

    @property
    def is_final(self) -> bool:
        return "final" in self.modifiers


@dataclass
class ClassInfo:
    qualified_name: str
    simple_name: str
    kind: ClassKind
    package: str
    unit_path: str
    superclass_name: str | None
    interface_names: list[str]
    fields: list[FieldInfo]
    methods: list[MethodInfo]
    loc: int
    start_line: int
    end_line: int
    modifiers: set[str]
    enclosing: str | None = None
    declared_with_class_keyword: bool = True
    type_refs: set[str] = field(default_factory=set)
    unique_word_count: int = 0
    # filled by resolve()
    resolved_superclass: str | None = None
    resolved_interfaces: list[str] = field(default_factory=list)
    resolved_refs: set[str] = field(default_factory=set)


@dataclass
class UnitError:
    message: str
    line: int


@dataclass
class SourceUnit:
    path: str
    package: str = ""
    imports: list[str] = field(default_factory=list)  # qualified names; '*' suffix for wildcard
    classes: list[ClassInfo] = field(default_factory=list)
    code_line_count: int = 0
    code_line_lengths: list[int] = field(default_factory=list)
    identifiers: set[str] = field(default_factory=set)
    error: UnitError | None = None


@dataclass
class StructuralModel:
    units: list[SourceUnit] = field(default_factory=list)
    classes: list[ClassInfo] = field(default_factory=list)
    # filled by resolve()
    resolution_index: dict[str, ClassInfo] = field(default_factory=dict)
    resolved: bool = False
    method_calls: dict[tuple[str, str, int], list[tuple[str, str, int]]] = field(default_factory=dict)
    method_callers: dict[tuple[str, str, int], set[tuple[str, str, int]]] = field(default_factory=dict)
    static_invocation_counts: dict[str, int] = field(default_factory=dict)

    def class_by_name(self, qualified: str) -> ClassInfo | None:
        return self.resolution_index.get(qualified)


@dataclass
class DependencyGraph:
    granularity: str  # file | class | package
    nodes: list[str]
    edges: list[tuple[str, str, str]]  # (from, to, kind); kind in {inherit, invoke, reference}

    def edge_pairs(self) -> set[tuple[str, str]]:
        return {(u, v) for u, v, _ in self.edges}

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {node: [] for node in self.nodes}
        for u, v in sorted(self.edge_pairs()):
            adj[u].append(v)
        return adj
