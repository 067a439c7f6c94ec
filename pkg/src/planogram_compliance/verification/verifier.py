"""Iterative product verification of facings the consistency check left missing."""

import math
from collections.abc import Collection, Iterable

import structlog

from planogram_compliance.errors import UnconstrainedTargetError
from planogram_compliance.matching.confidence import pairs_confidence
from planogram_compliance.models.geometry import BBox, Direction, iou
from planogram_compliance.models.matching import Assignment, AssignmentSource, MatchResult, Solution
from planogram_compliance.models.params import SolverParams, VerifyParams
from planogram_compliance.models.planogram import (
    Detection,
    ObservedNode,
    ObservedPlanogram,
    ReferencePlanogram,
)
from planogram_compliance.models.verification import (
    ComplianceIssue,
    IssueReason,
    Proposal,
    VerificationResult,
)
from planogram_compliance.verification.context import SceneContext
from planogram_compliance.verification.matchers.base import Matcher

logger = structlog.get_logger()

VERIFIED_PREFIX = "verified-"


def _assigned_neighbors(
    target: str, assigned: dict[str, str], reference: ReferencePlanogram
) -> list[tuple[Direction, str]]:
    """(direction, ref neighbour) pairs of ``target`` whose neighbour is assigned."""
    return [
        (direction, neighbor)
        for direction, neighbor in sorted(reference.neighbors(target).items())
        if neighbor in assigned
    ]


def select_target(missing: Collection[str], solution: Solution, reference: ReferencePlanogram) -> str:
    """The missing node with the most assigned neighbours; ties go to the smallest id."""
    if not missing:
        raise ValueError("no missing nodes to select from")
    assigned = solution.ref_to_obs
    return min(
        missing,
        key=lambda node: (-len(_assigned_neighbors(node, assigned, reference)), node),
    )


def _expected_size(
    target: str,
    neighbors: Iterable[str],
    assigned: dict[str, str],
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
) -> tuple[float, float]:
    """Pixel size of the target, scaled from metric sizes where both are known."""
    target_metric = reference.metric_size(target)
    scaled: list[tuple[float, float]] = []
    plain: list[tuple[float, float]] = []
    for neighbor in neighbors:
        box = observed.bbox_of(assigned[neighbor])
        plain.append((box.w, box.h))
        neighbor_metric = reference.metric_size(neighbor)
        if target_metric is not None and neighbor_metric is not None:
            scaled.append(
                (
                    box.w * target_metric.width_mm / neighbor_metric.width_mm,
                    box.h * target_metric.height_mm / neighbor_metric.height_mm,
                )
            )
    sizes = scaled or plain
    return (
        math.fsum(w for w, _ in sizes) / len(sizes),
        math.fsum(h for _, h in sizes) / len(sizes),
    )


def estimate_roi(
    target: str,
    solution: Solution,
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    params: VerifyParams | None = None,
) -> BBox:
    """
    Where ``target`` should appear in the image.

    Each assigned neighbour lying in direction d votes for its own centre
    moved one mean edge length along opposite(d); the votes are averaged.
    The box gets the expected pixel size, grown by ``roi_margin`` per side.

    Raises:
        UnconstrainedTargetError: If no neighbour of ``target`` is assigned
    """
    params = params or VerifyParams()
    assigned = solution.ref_to_obs
    neighbors = _assigned_neighbors(target, assigned, reference)
    if not neighbors:
        raise UnconstrainedTargetError(target)

    edge_length = observed.mean_edge_length()
    votes: list[tuple[float, float]] = []
    for direction, neighbor in neighbors:
        nx_, ny_ = observed.bbox_of(assigned[neighbor]).center
        ux, uy = direction.opposite.unit_vector
        votes.append((nx_ + ux * edge_length, ny_ + uy * edge_length))
    cx = math.fsum(x for x, _ in votes) / len(votes)
    cy = math.fsum(y for _, y in votes) / len(votes)

    w, h = _expected_size(target, (n for _, n in neighbors), assigned, reference, observed)
    return BBox.from_center(cx, cy, w, h).enlarged(params.roi_margin)


def score_proposal(
    proposal: Proposal,
    roi: BBox,
    proposals: Iterable[Proposal],
    max_raw_score: float | None = None,
) -> float:
    """
    Average of a position term and a confidence term, both in [0, 1].

    The position term falls linearly from 1 at the ROI centre to 0 at half
    the ROI diagonal. The confidence term divides ``raw_score`` by the
    matcher's declared maximum, else by the largest raw score among
    ``proposals``, else by 1 when that maximum is 0.
    """
    position = max(0.0, 1.0 - proposal.bbox.center_distance(roi) / (roi.diagonal / 2))
    norm = max_raw_score
    if norm is None:
        norm = max((p.raw_score for p in proposals), default=0.0)
    if norm <= 0:
        norm = 1.0
    confidence = min(1.0, proposal.raw_score / norm)
    return (position + confidence) / 2


def _project_from_nearest(
    target: str,
    assigned: dict[str, str],
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    edge_length: float,
) -> BBox | None:
    """ROI guess for a target with no assigned neighbour, from the closest assigned node."""
    if not assigned:
        return None
    row, col = reference.node(target).grid_pos

    def grid_distance(ref: str) -> tuple[int, str]:
        r, c = reference.node(ref).grid_pos
        return (max(abs(r - row), abs(c - col)), ref)

    anchor = min(assigned, key=grid_distance)
    anchor_row, anchor_col = reference.node(anchor).grid_pos
    box = observed.bbox_of(assigned[anchor])
    ax, ay = box.center
    return BBox.from_center(
        ax + (col - anchor_col) * edge_length,
        ay + (row - anchor_row) * edge_length,
        box.w,
        box.h,
    )


def _fresh_id(observed: ObservedPlanogram, target: str) -> str:
    node_id = f"{VERIFIED_PREFIX}{target}"
    suffix = 1
    while node_id in observed:
        suffix += 1
        node_id = f"{VERIFIED_PREFIX}{target}-{suffix}"
    return node_id


def verify_all(
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    match: MatchResult,
    scene: SceneContext,
    matcher: Matcher,
    params: VerifyParams | None = None,
    solver_params: SolverParams | None = None,
) -> VerificationResult:
    """
    Verify missing facings one at a time until each is resolved.

    Every iteration re-ranks the pending facings, estimates the ROI of the
    best-constrained one and asks ``matcher`` for proposals. Proposals
    overlapping an assigned box by more than ``overlap_iou_max`` are
    dropped; if the best remaining score reaches ``accept_threshold`` the
    proposal becomes a new observed node linked to its assigned neighbours,
    otherwise a compliance issue is recorded. Facings left without any
    assigned neighbour are reported with reason ``no-proposals``.

    When the scene frame is known, a facing whose expected centre falls
    outside the image is classified as out of view instead of as an issue.
    """
    params = params or VerifyParams()
    solver_params = solver_params or SolverParams()
    frame = scene.frame

    assignments = {a.ref_node: a for a in match.solution.assignments}
    pending = set(match.missing_ref_nodes)
    issues: list[ComplianceIssue] = []
    verified: list[str] = []
    out_of_view: set[str] = set()
    iterations = 0

    def current_solution() -> Solution:
        return Solution(assignments=tuple(assignments[r] for r in sorted(assignments)))

    def report(target: str, roi: BBox | None, reason: IssueReason, best: float | None = None) -> None:
        issue = ComplianceIssue(
            ref_node=target,
            expected_product=reference.product_of(target),
            expected_roi=roi,
            reason=reason,
            best_score=best,
        )
        issues.append(issue)
        logger.info("verification_issue", ref_node=target, reason=reason.value, best_score=best)

    while True:
        solution = current_solution()
        assigned = solution.ref_to_obs
        constrained = [n for n in pending if _assigned_neighbors(n, assigned, reference)]
        if not constrained:
            break
        iterations += 1
        target = select_target(constrained, solution, reference)
        pending.discard(target)
        roi = estimate_roi(target, solution, reference, observed, params)

        if frame is not None and not frame.contains_point(*roi.center):
            out_of_view.add(target)
            logger.debug("target_out_of_view", ref_node=target)
            continue

        product = reference.product_of(target)
        proposals = matcher.propose(scene, product, roi)
        if not proposals:
            report(target, roi, IssueReason.NO_PROPOSALS)
            continue

        taken = [observed.bbox_of(obs) for obs in assigned.values()]
        kept = [p for p in proposals if all(iou(p.bbox, box) <= params.overlap_iou_max for box in taken)]
        if not kept:
            report(target, roi, IssueReason.ALL_OVERLAPPING)
            continue

        scored = [(score_proposal(p, roi, kept, matcher.max_raw_score), p) for p in kept]
        best_score, best = max(scored, key=lambda item: item[0])
        if best_score < params.accept_threshold:
            report(target, roi, IssueReason.BEST_SCORE_BELOW_THRESHOLD, best_score)
            continue

        node_id = _fresh_id(observed, target)
        detection = Detection(det_id=node_id, product=product, bbox=best.bbox, confidence=best_score)
        links = [(d, assigned[n]) for d, n in _assigned_neighbors(target, assigned, reference)]
        observed = observed.with_node(ObservedNode(node_id=node_id, detection=detection), links)
        assignments[target] = Assignment(
            ref_node=target,
            obs_node=node_id,
            score=best_score,
            source=AssignmentSource.VERIFICATION,
        )
        verified.append(node_id)
        logger.info("facing_verified", ref_node=target, obs_node=node_id, score=best_score)

    # Stalled facings: nothing assigned around them to anchor a ROI.
    assigned = {r: a.obs_node for r, a in assignments.items()}
    edge_length = observed.mean_edge_length()
    for target in sorted(pending):
        projected = _project_from_nearest(target, assigned, reference, observed, edge_length)
        if frame is not None and projected is not None and not frame.contains_point(*projected.center):
            out_of_view.add(target)
            continue
        roi = projected.enlarged(params.roi_margin) if projected is not None else None
        report(target, roi, IssueReason.NO_PROPOSALS)

    final = match.solution
    if verified:
        final = Solution(
            assignments=tuple(assignments[r] for r in sorted(assignments)),
            confidence=pairs_confidence(sorted(assigned.items()), reference, observed, solver_params),
            seed_hypothesis=match.solution.seed_hypothesis,
        )
    logger.info(
        "verification_completed",
        planogram=reference.name,
        iterations=iterations,
        verified=len(verified),
        issues=len(issues),
        out_of_view=len(out_of_view),
    )
    return VerificationResult(
        observed=observed,
        solution=final,
        issues=tuple(sorted(issues, key=lambda i: i.ref_node)),
        verified_obs_nodes=tuple(verified),
        out_of_view=frozenset(out_of_view),
        iterations=iterations,
    )
