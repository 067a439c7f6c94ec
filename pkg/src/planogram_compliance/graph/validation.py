"""Structural checks for planogram graphs."""

from collections import defaultdict
from enum import Enum

from pydantic import BaseModel, ConfigDict

from planogram_compliance.graph.topology import connected_components
from planogram_compliance.models.geometry import Direction
from planogram_compliance.models.planogram import ObservedPlanogram, ReferencePlanogram


class ViolationKind(str, Enum):
    """Kinds of structural defects."""

    ASYMMETRIC_EDGE = "asymmetric edge"
    DUPLICATE_DIRECTION = "duplicate direction slot"
    DISCONNECTED = "disconnected"


class GraphViolation(BaseModel):
    """One violated invariant."""

    model_config = ConfigDict(frozen=True)

    kind: ViolationKind
    node_id: str | None = None
    detail: str = ""


def validate_graph(graph: ReferencePlanogram | ObservedPlanogram) -> list[GraphViolation]:
    """Report every violated invariant; an empty list means the graph is well formed.

    Connectivity is only required of reference planograms.
    """
    violations: list[GraphViolation] = []
    edge_set = set(graph.edges)

    for edge in sorted(edge_set):
        mirror = (edge.target, edge.direction.opposite, edge.source)
        if mirror not in edge_set:
            violations.append(
                GraphViolation(
                    kind=ViolationKind.ASYMMETRIC_EDGE,
                    node_id=edge.source,
                    detail=f"{edge.source} -{edge.direction.value}-> {edge.target} has no mirror",
                )
            )

    slots: dict[tuple[str, Direction], set[str]] = defaultdict(set)
    for edge in edge_set:
        slots[(edge.source, edge.direction)].add(edge.target)
    for (node_id, direction), targets in sorted(slots.items()):
        if len(targets) > 1:
            violations.append(
                GraphViolation(
                    kind=ViolationKind.DUPLICATE_DIRECTION,
                    node_id=node_id,
                    detail=f"{direction.value} -> {sorted(targets)}",
                )
            )

    if isinstance(graph, ReferencePlanogram) and len(graph) > 0:
        components = connected_components(graph)
        if len(components) > 1:
            violations.append(
                GraphViolation(
                    kind=ViolationKind.DISCONNECTED,
                    detail=f"{len(components)} components",
                )
            )

    return violations
