"""Planogram graph models: catalog, reference and observed planograms."""

import math
from abc import ABC, abstractmethod
from collections.abc import Iterable, Iterator
from typing import Annotated, Any, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, StringConstraints, model_validator

from planogram_compliance.models.geometry import BBox, Direction

ProductId = Annotated[str, StringConstraints(min_length=1, pattern=r"^\S+$")]
NodeId = Annotated[str, StringConstraints(min_length=1)]


class Edge(NamedTuple):
    """Directed, labelled edge: ``target`` lies in ``direction`` of ``source``."""

    source: str
    direction: Direction
    target: str


class MetricSize(BaseModel):
    """Physical product size in millimetres."""

    model_config = ConfigDict(frozen=True)

    width_mm: float = Field(..., gt=0)
    height_mm: float = Field(..., gt=0)


class Product(BaseModel):
    """One catalog entry."""

    model_config = ConfigDict(frozen=True)

    id: ProductId
    metric_size: MetricSize | None = None
    category: int | None = None


class GridExtent(BaseModel):
    """Inclusive rectangle of grid positions."""

    model_config = ConfigDict(frozen=True)

    min_row: int
    min_col: int
    max_row: int
    max_col: int

    @model_validator(mode="after")
    def _check_order(self) -> "GridExtent":
        if self.min_row > self.max_row or self.min_col > self.max_col:
            raise ValueError("grid extent has min greater than max")
        return self

    def contains(self, row: int, col: int) -> bool:
        return self.min_row <= row <= self.max_row and self.min_col <= col <= self.max_col

    @property
    def rows(self) -> int:
        return self.max_row - self.min_row + 1

    @property
    def cols(self) -> int:
        return self.max_col - self.min_col + 1

    @classmethod
    def covering(cls, positions: Iterable[tuple[int, int]]) -> "GridExtent | None":
        cells = list(positions)
        if not cells:
            return None
        rows = [r for r, _ in cells]
        cols = [c for _, c in cells]
        return cls(min_row=min(rows), min_col=min(cols), max_row=max(rows), max_col=max(cols))


class ReferenceNode(BaseModel):
    """A planned product facing at an integer grid position."""

    model_config = ConfigDict(frozen=True)

    node_id: NodeId
    product: ProductId
    row: int
    col: int
    metric_size: MetricSize | None = None

    @property
    def grid_pos(self) -> tuple[int, int]:
        return (self.row, self.col)


class Detection(BaseModel):
    """A labelled box produced by a detector (or by verification)."""

    model_config = ConfigDict(frozen=True)

    det_id: NodeId
    product: ProductId
    bbox: BBox
    confidence: float = Field(default=1.0, ge=0)


class ObservedNode(BaseModel):
    """A node of the observed planogram, one per detection."""

    model_config = ConfigDict(frozen=True)

    node_id: NodeId
    detection: Detection

    @property
    def product(self) -> str:
        return self.detection.product

    @property
    def bbox(self) -> BBox:
        return self.detection.bbox


class _PlanogramGraph(BaseModel, ABC):
    """Shared adjacency bookkeeping for reference and observed graphs.

    Node ids must be unique and edges must reference existing nodes; the
    directional invariants (symmetry, one neighbour per slot, connectivity)
    are reported by ``graph.validation.validate_graph`` instead of raised.
    """

    model_config = ConfigDict(frozen=True)

    edges: tuple[Edge, ...] = ()

    _index: dict[str, Any] = PrivateAttr(default_factory=dict)
    _adjacency: dict[str, dict[Direction, str]] = PrivateAttr(default_factory=dict)

    @abstractmethod
    def _node_list(self) -> tuple[Any, ...]:
        """The nodes of the concrete graph."""

    def model_post_init(self, __context: Any) -> None:
        index: dict[str, Any] = {}
        for node in self._node_list():
            if node.node_id in index:
                raise ValueError(f"duplicate node_id: {node.node_id}")
            index[node.node_id] = node
        adjacency: dict[str, dict[Direction, str]] = {node_id: {} for node_id in index}
        for edge in sorted(self.edges):
            if edge.source not in index or edge.target not in index:
                raise ValueError(f"edge references unknown node: {edge}")
            if edge.source == edge.target:
                raise ValueError(f"self-loop edge: {edge}")
            adjacency[edge.source].setdefault(edge.direction, edge.target)
        self._index = index
        self._adjacency = adjacency

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._index

    @property
    def node_ids(self) -> list[str]:
        """Node ids in lexicographic order."""
        return sorted(self._index)

    def neighbors(self, node_id: str) -> dict[Direction, str]:
        """Neighbour per direction (first edge wins if a slot is duplicated)."""
        return self._adjacency[node_id]

    def degree(self, node_id: str) -> int:
        return len(self._adjacency[node_id])

    def iter_undirected(self) -> Iterator[tuple[str, str]]:
        seen: set[tuple[str, str]] = set()
        for edge in self.edges:
            key = (min(edge.source, edge.target), max(edge.source, edge.target))
            if key not in seen:
                seen.add(key)
                yield key


class ReferencePlanogram(_PlanogramGraph):
    """The ideal, connected, grid-like layout of an aisle."""

    name: str = "planogram"
    products: dict[str, Product] = Field(default_factory=dict)
    nodes: tuple[ReferenceNode, ...]

    def _node_list(self) -> tuple[Any, ...]:
        return self.nodes

    def model_post_init(self, __context: Any) -> None:
        super().model_post_init(__context)
        seen: dict[tuple[int, int], str] = {}
        for node in self.nodes:
            if node.grid_pos in seen:
                raise ValueError(
                    f"grid position {node.grid_pos} shared by {seen[node.grid_pos]} and {node.node_id}"
                )
            seen[node.grid_pos] = node.node_id

    def node(self, node_id: str) -> ReferenceNode:
        node: ReferenceNode = self._index[node_id]
        return node

    def product_of(self, node_id: str) -> str:
        return self.node(node_id).product

    def metric_size(self, node_id: str) -> MetricSize | None:
        node = self.node(node_id)
        if node.metric_size is not None:
            return node.metric_size
        product = self.products.get(node.product)
        return product.metric_size if product else None

    def extent(self) -> GridExtent | None:
        return GridExtent.covering(node.grid_pos for node in self.nodes)

    def catalog(self) -> list[str]:
        """Product ids known to this planogram, catalog first, in sorted order."""
        return sorted(set(self.products) | {node.product for node in self.nodes})


class ObservedPlanogram(_PlanogramGraph):
    """Graph of detections in one image; may be disconnected."""

    nodes: tuple[ObservedNode, ...] = ()

    def _node_list(self) -> tuple[Any, ...]:
        return self.nodes

    def node(self, node_id: str) -> ObservedNode:
        node: ObservedNode = self._index[node_id]
        return node

    def product_of(self, node_id: str) -> str:
        return self.node(node_id).product

    def bbox_of(self, node_id: str) -> BBox:
        return self.node(node_id).bbox

    def mean_edge_length(self) -> float:
        """Mean centre-to-centre distance over all edges.

        Falls back to the mean of ``max(w, h)`` over the nodes when there are
        no edges, and to 0 for an empty graph.
        """
        lengths = [
            self.bbox_of(a).center_distance(self.bbox_of(b)) for a, b in self.iter_undirected()
        ]
        if lengths:
            return math.fsum(lengths) / len(lengths)
        if not self.nodes:
            return 0.0
        return math.fsum(max(n.bbox.w, n.bbox.h) for n in self.nodes) / len(self.nodes)

    def with_node(self, node: ObservedNode, links: Iterable[tuple[Direction, str]]) -> "ObservedPlanogram":
        """Return a copy extended by ``node`` linked to existing nodes.

        Links whose direction slot is already taken on either side are skipped,
        so the result keeps per-slot uniqueness and edge symmetry.
        """
        new_edges = list(self.edges)
        taken: dict[str, set[Direction]] = {nid: set(adj) for nid, adj in self._adjacency.items()}
        taken[node.node_id] = set()
        for direction, other in links:
            if direction in taken[node.node_id] or direction.opposite in taken[other]:
                continue
            new_edges.append(Edge(node.node_id, direction, other))
            new_edges.append(Edge(other, direction.opposite, node.node_id))
            taken[node.node_id].add(direction)
            taken[other].add(direction.opposite)
        return ObservedPlanogram(nodes=(*self.nodes, node), edges=tuple(new_edges))

    def detections(self) -> list[Detection]:
        return [node.detection for node in self.nodes]
