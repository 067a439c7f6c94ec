"""Topology helpers shared by the builder, the solver and the loaders."""

from collections.abc import Iterable

import networkx as nx

from planogram_compliance.models.geometry import Direction
from planogram_compliance.models.planogram import (
    Edge,
    ObservedPlanogram,
    ReferenceNode,
    ReferencePlanogram,
)


def to_networkx(graph: ReferencePlanogram | ObservedPlanogram) -> nx.Graph:
    """Undirected view with ``product`` node attributes and ``direction`` edge attributes.

    The edge attribute holds the direction from the lexicographically smaller
    endpoint to the larger one.
    """
    g = nx.Graph()
    for node_id in graph.node_ids:
        g.add_node(node_id, product=graph.product_of(node_id))
    for edge in sorted(graph.edges):
        if g.has_edge(edge.source, edge.target):
            continue
        direction = edge.direction if edge.source < edge.target else edge.direction.opposite
        g.add_edge(edge.source, edge.target, direction=direction.value)
    return g


def connected_components(graph: ReferencePlanogram | ObservedPlanogram) -> list[frozenset[str]]:
    """Components ordered by their smallest node id."""
    components = [frozenset(c) for c in nx.connected_components(to_networkx(graph))]
    return sorted(components, key=min)


def grid_edges(nodes: Iterable[ReferenceNode]) -> tuple[Edge, ...]:
    """Edges of the 8-neighbourhood on the integer grid."""
    by_pos = {node.grid_pos: node.node_id for node in nodes}
    edges: list[Edge] = []
    for (row, col), node_id in sorted(by_pos.items()):
        for direction in Direction:
            dr, dc = direction.grid_offset
            other = by_pos.get((row + dr, col + dc))
            if other is not None:
                edges.append(Edge(node_id, direction, other))
    return tuple(edges)
