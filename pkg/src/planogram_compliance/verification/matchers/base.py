"""Base proposal matcher interface."""

from abc import ABC, abstractmethod

import structlog

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.verification import Proposal
from planogram_compliance.verification.context import SceneContext

logger = structlog.get_logger()


class Matcher(ABC):
    """
    Abstract base class for detection-proposal matchers.

    A matcher looks for one product inside a region of interest and returns
    scored candidate boxes. ``max_raw_score`` is the constant that
    normalises ``raw_score`` to [0, 1]; ``None`` means the verifier falls
    back to the per-query maximum.
    """

    name: str = "matcher"
    max_raw_score: float | None = None

    @abstractmethod
    def find_proposals(self, scene: SceneContext, product: str, roi: BBox) -> list[Proposal]:
        """
        Search ``roi`` for instances of ``product``.

        Args:
            scene: Image-side inputs
            product: The sought product id
            roi: Region of interest in image pixels

        Returns:
            Candidate boxes with their raw scores
        """
        pass

    def can_handle(self, scene: SceneContext) -> bool:
        """Check whether ``scene`` carries the inputs this matcher needs."""
        return True

    def propose(self, scene: SceneContext, product: str, roi: BBox) -> list[Proposal]:
        """:meth:`find_proposals` restricted to boxes that intersect ``roi``."""
        if not self.can_handle(scene):
            logger.warning("matcher_missing_inputs", matcher=self.name, product=product)
            return []
        proposals = [p for p in self.find_proposals(scene, product, roi) if p.bbox.intersects(roi)]
        logger.debug("proposals_found", matcher=self.name, product=product, count=len(proposals))
        return proposals
