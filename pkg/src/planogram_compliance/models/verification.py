"""Product verification models."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.matching import Solution
from planogram_compliance.models.planogram import ObservedPlanogram


class Proposal(BaseModel):
    """A candidate location for a sought product inside a ROI."""

    model_config = ConfigDict(frozen=True)

    bbox: BBox
    raw_score: float = Field(..., ge=0)


class IssueReason(str, Enum):
    """Why a planned facing could not be verified."""

    NO_PROPOSALS = "no-proposals"
    ALL_OVERLAPPING = "all-overlapping"
    BEST_SCORE_BELOW_THRESHOLD = "best-score-below-threshold"


class ComplianceIssue(BaseModel):
    """A missing or misplaced facing.

    Low-stock and misplaced items are deliberately not told apart.
    """

    model_config = ConfigDict(frozen=True)

    ref_node: str
    expected_product: str
    expected_roi: BBox | None = None
    reason: IssueReason
    best_score: float | None = None


class VerificationResult(BaseModel):
    """Final observed graph and solution after the verification loop."""

    model_config = ConfigDict(frozen=True)

    observed: ObservedPlanogram
    solution: Solution
    issues: tuple[ComplianceIssue, ...] = ()
    verified_obs_nodes: tuple[str, ...] = ()
    out_of_view: frozenset[str] = frozenset()
    iterations: int = 0
