"""Lightweight Java frontend: lexer, structural parser, name resolution, graphs."""

from .model import (
    ClassInfo,
    ClassKind,
    DependencyGraph,
    FieldInfo,
    Invocation,
    MethodInfo,
    SourceUnit,
    StatementStats,
    StructuralModel,
)
from .parser import parse_unit
from .resolve import resolve
from .graphs import build_graph

__all__ = [
    "ClassInfo",
    "ClassKind",
    "DependencyGraph",
    "FieldInfo",
    "Invocation",
    "MethodInfo",
    "SourceUnit",
    "StatementStats",
    "StructuralModel",
    "parse_unit",
    "resolve",
    "build_graph",
]
