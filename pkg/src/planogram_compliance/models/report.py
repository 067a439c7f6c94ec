"""Compliance report emitted by the pipeline."""

from pydantic import BaseModel, ConfigDict, Field

from planogram_compliance.models.evaluation import Stage
from planogram_compliance.models.matching import Assignment, MatchResult
from planogram_compliance.models.planogram import Detection, GridExtent
from planogram_compliance.models.verification import ComplianceIssue, VerificationResult


class Timings(BaseModel):
    """Wall-clock seconds spent in each stage."""

    build_s: float = 0.0
    match_s: float = 0.0
    verify_s: float = 0.0
    total_s: float = 0.0


class ComplianceReport(BaseModel):
    """Everything a caller needs to act on one shelf image."""

    model_config = ConfigDict(frozen=True)

    planogram: str
    best_ref_index: int = 0
    confidence: float = Field(default=0.0, ge=0)
    assignments: tuple[Assignment, ...] = ()
    issues: tuple[ComplianceIssue, ...] = ()
    missing_after_matching: tuple[str, ...] = ()
    out_of_view: tuple[str, ...] = ()
    localization: GridExtent | None = None
    stage_detections: dict[Stage, tuple[Detection, ...]] = Field(default_factory=dict)
    timings: Timings = Field(default_factory=Timings)

    @property
    def is_compliant(self) -> bool:
        return not self.issues


class CheckOutcome(BaseModel):
    """A compliance report together with the graphs it was derived from."""

    model_config = ConfigDict(frozen=True)

    report: ComplianceReport
    match: MatchResult
    verification: VerificationResult
