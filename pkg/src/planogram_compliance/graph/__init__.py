"""Observed-graph construction, validation and topology."""

from planogram_compliance.graph.builder import build_observed, classify_direction
from planogram_compliance.graph.topology import connected_components, grid_edges, to_networkx
from planogram_compliance.graph.validation import GraphViolation, ViolationKind, validate_graph

__all__ = [
    "build_observed",
    "classify_direction",
    "connected_components",
    "grid_edges",
    "to_networkx",
    "GraphViolation",
    "ViolationKind",
    "validate_graph",
]
