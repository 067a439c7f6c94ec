"""Build the observed planogram from a flat list of detections."""

import math
from collections.abc import Sequence

import structlog

from planogram_compliance.errors import DegenerateOffsetError, DuplicateDetectionError
from planogram_compliance.models.geometry import SECTOR_ORDER, Direction
from planogram_compliance.models.params import BuilderParams
from planogram_compliance.models.planogram import Detection, Edge, ObservedNode, ObservedPlanogram

logger = structlog.get_logger()


def classify_direction(
    from_center: tuple[float, float],
    to_center: tuple[float, float],
    sector_half_width_deg: float = 22.5,
) -> Direction | None:
    """
    Classify the offset between two image points into one of 8 sectors.

    Sectors are half-open, ``[centre - w, centre + w)`` walking
    counterclockwise, with E at 0 degrees and N at +90 degrees once the
    y-down image offset is flipped to the y-up math convention. With the
    default half width of 22.5 degrees the sectors tile the circle, so
    ``None`` is only returned for narrower sectors.

    Raises:
        DegenerateOffsetError: If the two centers coincide
    """
    dx = to_center[0] - from_center[0]
    dy = to_center[1] - from_center[1]
    if dx == 0 and dy == 0:
        raise DegenerateOffsetError()

    angle = math.degrees(math.atan2(-dy, dx)) % 360.0
    index = math.floor((angle + 22.5) / 45.0) % 8
    sector_center = index * 45.0
    # Signed offset from the sector centre in (-180, 180].
    delta = (angle - sector_center + 180.0) % 360.0 - 180.0
    if not -sector_half_width_deg <= delta < sector_half_width_deg:
        return None
    return SECTOR_ORDER[index]


def build_observed(
    detections: Sequence[Detection],
    params: BuilderParams | None = None,
) -> ObservedPlanogram:
    """
    Build the observed graph by directional neighbour search.

    Every detection becomes a node (node_id = det_id). Each unordered pair
    closer than ``alpha * (diag_a + diag_b) / 2`` is a candidate edge, labelled
    by the sector the second centre falls into. Candidates are accepted
    greedily by ascending centre distance (ties by det_id pair) while both
    direction slots are free, which keeps only the closest pair when two boxes
    compete for the same slot.

    Raises:
        DuplicateDetectionError: If a det_id appears twice
    """
    params = params or BuilderParams()
    ordered = sorted(detections, key=lambda d: d.det_id)
    for previous, current in zip(ordered, ordered[1:], strict=False):
        if previous.det_id == current.det_id:
            raise DuplicateDetectionError(current.det_id)

    candidates: list[tuple[float, str, str, Direction]] = []
    for i, a in enumerate(ordered):
        a_center = a.bbox.center
        for b in ordered[i + 1 :]:
            b_center = b.bbox.center
            distance = math.hypot(b_center[0] - a_center[0], b_center[1] - a_center[1])
            threshold = params.alpha * (a.bbox.diagonal + b.bbox.diagonal) / 2
            if distance > threshold or distance == 0:
                continue
            direction = classify_direction(a_center, b_center, params.sector_half_width_deg)
            if direction is None:
                continue
            candidates.append((distance, a.det_id, b.det_id, direction))

    candidates.sort(key=lambda c: (c[0], c[1], c[2]))
    taken: set[tuple[str, Direction]] = set()
    edges: list[Edge] = []
    for _, a_id, b_id, direction in candidates:
        back = direction.opposite
        if (a_id, direction) in taken or (b_id, back) in taken:
            continue
        taken.add((a_id, direction))
        taken.add((b_id, back))
        edges.append(Edge(a_id, direction, b_id))
        edges.append(Edge(b_id, back, a_id))

    graph = ObservedPlanogram(
        nodes=tuple(ObservedNode(node_id=d.det_id, detection=d) for d in ordered),
        edges=tuple(sorted(edges)),
    )
    logger.debug(
        "observed_graph_built",
        nodes=len(ordered),
        candidates=len(candidates),
        edges=len(edges) // 2,
    )
    return graph
