"""Class-, method-, and system-level metric computation."""

from .code import ClassMetricsRow, MethodMetricsRow, class_metrics, cyclomatic, method_metrics, readability
from .system import SystemMetrics, compute_system_metrics, propagation_cost, strongly_connected_components

__all__ = [
    "ClassMetricsRow",
    "MethodMetricsRow",
    "class_metrics",
    "cyclomatic",
    "method_metrics",
    "readability",
    "SystemMetrics",
    "compute_system_metrics",
    "propagation_cost",
    "strongly_connected_components",
]
