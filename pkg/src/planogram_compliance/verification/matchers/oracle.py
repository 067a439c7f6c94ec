"""Simulator-backed matcher that answers from the ground truth."""

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.verification import Proposal
from planogram_compliance.verification.context import SceneContext
from planogram_compliance.verification.matchers.base import Matcher


class OracleMatcher(Matcher):
    """
    Returns the true box of the sought product when it is really there.

    An item answers only if its box contains the ROI centre, so a
    same-product facing next to the target never stands in for it.
    """

    name = "oracle"
    max_raw_score = 1.0

    def can_handle(self, scene: SceneContext) -> bool:
        return scene.ground_truth is not None

    def find_proposals(self, scene: SceneContext, product: str, roi: BBox) -> list[Proposal]:
        if scene.ground_truth is None:
            return []
        cx, cy = roi.center
        return [
            Proposal(bbox=item.bbox, raw_score=1.0)
            for item in scene.ground_truth.items
            if item.product == product and item.bbox.contains_point(cx, cy)
        ]
