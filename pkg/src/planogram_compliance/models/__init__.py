"""Pydantic models for the planogram compliance engine."""

from planogram_compliance.models.evaluation import (
    DatasetReport,
    DetectionMatch,
    EvalResult,
    SceneEvaluation,
    Stage,
)
from planogram_compliance.models.geometry import BBox, Direction, iou, opposite
from planogram_compliance.models.matching import (
    Assignment,
    AssignmentSource,
    Hypothesis,
    MatchResult,
    Solution,
)
from planogram_compliance.models.params import (
    BuilderParams,
    NoiseParams,
    SolverParams,
    VerifyParams,
)
from planogram_compliance.models.planogram import (
    Detection,
    Edge,
    GridExtent,
    MetricSize,
    ObservedNode,
    ObservedPlanogram,
    Product,
    ReferenceNode,
    ReferencePlanogram,
)
from planogram_compliance.models.report import CheckOutcome, ComplianceReport, Timings
from planogram_compliance.models.scene import GroundTruthItem, GroundTruthScene
from planogram_compliance.models.verification import (
    ComplianceIssue,
    IssueReason,
    Proposal,
    VerificationResult,
)

__all__ = [
    # Geometry
    "BBox",
    "Direction",
    "iou",
    "opposite",
    # Planogram
    "Detection",
    "Edge",
    "GridExtent",
    "MetricSize",
    "ObservedNode",
    "ObservedPlanogram",
    "Product",
    "ReferenceNode",
    "ReferencePlanogram",
    # Params
    "BuilderParams",
    "NoiseParams",
    "SolverParams",
    "VerifyParams",
    # Matching
    "Assignment",
    "AssignmentSource",
    "Hypothesis",
    "MatchResult",
    "Solution",
    # Verification
    "ComplianceIssue",
    "IssueReason",
    "Proposal",
    "VerificationResult",
    # Scene
    "GroundTruthItem",
    "GroundTruthScene",
    # Evaluation
    "DatasetReport",
    "DetectionMatch",
    "EvalResult",
    "SceneEvaluation",
    "Stage",
    # Report
    "CheckOutcome",
    "ComplianceReport",
    "Timings",
]
