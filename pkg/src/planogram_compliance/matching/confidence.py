"""Solution confidence with the disconnected-component penalty."""

import math
from collections.abc import Iterable
from itertools import combinations

from pydantic import BaseModel, ConfigDict

from planogram_compliance.graph.topology import connected_components
from planogram_compliance.models.matching import Solution
from planogram_compliance.models.params import SolverParams
from planogram_compliance.models.planogram import ObservedPlanogram, ReferencePlanogram


class ObservedLayout(BaseModel):
    """Per-graph quantities the confidence needs, computed once per solve."""

    model_config = ConfigDict(frozen=True)

    component_of: dict[str, int]
    edge_length: float

    @classmethod
    def of(cls, observed: ObservedPlanogram) -> "ObservedLayout":
        component_of = {
            node_id: index
            for index, component in enumerate(connected_components(observed))
            for node_id in component
        }
        return cls(component_of=component_of, edge_length=observed.mean_edge_length())


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def count_displaced_components(
    pairs: Iterable[tuple[str, str]],
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    layout: ObservedLayout,
) -> int:
    """
    Count pairs of matched components whose relative placement disagrees with the reference.

    Each matched component is anchored on its assigned observed node with the
    smallest node_id. The pixel displacement between two anchors, divided by
    the mean observed edge length and rounded, is compared with the grid
    offset of the corresponding reference nodes; a Chebyshev disagreement
    above one cell counts as one displaced pair.
    """
    anchors: dict[int, tuple[str, str]] = {}
    for ref_id, obs_id in pairs:
        component = layout.component_of[obs_id]
        current = anchors.get(component)
        if current is None or obs_id < current[0]:
            anchors[component] = (obs_id, ref_id)
    if len(anchors) < 2 or layout.edge_length <= 0:
        return 0

    displaced = 0
    for (_, (obs_a, ref_a)), (_, (obs_b, ref_b)) in combinations(sorted(anchors.items()), 2):
        ax, ay = observed.bbox_of(obs_a).center
        bx, by = observed.bbox_of(obs_b).center
        seen_cols = _round_half_up((bx - ax) / layout.edge_length)
        seen_rows = _round_half_up((by - ay) / layout.edge_length)
        node_a, node_b = reference.node(ref_a), reference.node(ref_b)
        planned_rows = node_b.row - node_a.row
        planned_cols = node_b.col - node_a.col
        if max(abs(seen_rows - planned_rows), abs(seen_cols - planned_cols)) > 1:
            displaced += 1
    return displaced


def pairs_confidence(
    pairs: list[tuple[str, str]],
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    params: SolverParams,
    layout: ObservedLayout | None = None,
) -> float:
    """Confidence of a raw (ref, obs) pair list; see :func:`confidence`."""
    if not pairs:
        return 0.0
    layout = layout or ObservedLayout.of(observed)
    displaced = count_displaced_components(pairs, reference, observed, layout)
    return max(0.0, len(pairs) - params.lambda_penalty * displaced)


def confidence(
    solution: Solution,
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    params: SolverParams | None = None,
    layout: ObservedLayout | None = None,
) -> float:
    """C = max(0, |S| - lambda * M); equals |S| when the matched part of O is one component."""
    return pairs_confidence(solution.pairs, reference, observed, params or SolverParams(), layout)
