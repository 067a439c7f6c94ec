"""Pipeline driver: detections in, compliance report out."""

import asyncio
import time
from collections.abc import Sequence

import structlog
from pydantic import BaseModel, ConfigDict, Field

from planogram_compliance.config import Settings, get_settings
from planogram_compliance.evaluation.metrics import evaluate_dataset, evaluate_scene
from planogram_compliance.graph.builder import build_observed
from planogram_compliance.matching.solver import solve_multi
from planogram_compliance.models.evaluation import DatasetReport, SceneEvaluation, Stage
from planogram_compliance.models.planogram import Detection, ReferencePlanogram
from planogram_compliance.models.report import CheckOutcome, ComplianceReport, Timings
from planogram_compliance.verification.context import SceneContext
from planogram_compliance.verification.matchers.base import Matcher
from planogram_compliance.verification.matchers.registry import MatcherRegistry
from planogram_compliance.verification.verifier import verify_all

logger = structlog.get_logger()


class SceneInput(BaseModel):
    """One image to check: candidate planograms, detections and image-side context."""

    model_config = ConfigDict(frozen=True)

    name: str
    references: tuple[ReferencePlanogram, ...]
    detections: tuple[Detection, ...]
    scene: SceneContext = Field(default_factory=SceneContext)


class ComplianceChecker:
    """
    Runs build -> match -> verify for shelf images.

    A single image is processed sequentially; datasets are fanned out over
    worker threads by :meth:`evaluate_scenes`.
    """

    def __init__(self, settings: Settings | None = None, registry: MatcherRegistry | None = None):
        self.settings = settings or get_settings()
        self.builder_params = self.settings.builder_params()
        self.solver_params = self.settings.solver_params()
        self.verify_params = self.settings.verify_params()
        self.registry = registry or MatcherRegistry(self.verify_params)

    def matcher(self, name: str | None = None) -> Matcher:
        return self.registry.get(name or self.settings.matcher.value)

    def check(
        self,
        references: Sequence[ReferencePlanogram],
        detections: Sequence[Detection],
        scene: SceneContext | None = None,
        matcher: Matcher | None = None,
    ) -> CheckOutcome:
        """
        Check one image against one or more planograms.

        With several planograms the scene is localised first and verified
        against the best one only.
        """
        scene = scene or SceneContext()
        matcher = matcher or self.matcher()
        start = time.perf_counter()

        observed = build_observed(detections, self.builder_params)
        built = time.perf_counter()

        best_index, match = solve_multi(references, observed, self.solver_params)
        reference = references[best_index]
        matched = time.perf_counter()

        verification = verify_all(
            reference,
            observed,
            match,
            scene,
            matcher,
            self.verify_params,
            self.solver_params,
        )
        verified = time.perf_counter()

        final = verification.observed
        report = ComplianceReport(
            planogram=reference.name,
            best_ref_index=best_index,
            confidence=verification.solution.confidence,
            assignments=verification.solution.assignments,
            issues=verification.issues,
            missing_after_matching=tuple(sorted(match.missing_ref_nodes)),
            out_of_view=tuple(sorted(verification.out_of_view)),
            localization=match.localization,
            stage_detections={
                Stage.DETECTION: tuple(detections),
                Stage.CONSISTENCY: tuple(
                    observed.node(n).detection for n in sorted(match.consistent_obs_nodes)
                ),
                Stage.VERIFICATION: tuple(
                    final.node(a.obs_node).detection for a in verification.solution.assignments
                ),
            },
            timings=Timings(
                build_s=built - start,
                match_s=matched - built,
                verify_s=verified - matched,
                total_s=verified - start,
            ),
        )
        logger.info(
            "check_completed",
            planogram=reference.name,
            detections=len(detections),
            assigned=len(report.assignments),
            issues=len(report.issues),
            match_s=round(report.timings.match_s, 4),
        )
        return CheckOutcome(report=report, match=match, verification=verification)

    def check_and_evaluate(self, item: SceneInput) -> tuple[CheckOutcome, SceneEvaluation]:
        """Check a scene that carries ground truth and score every stage against it."""
        if item.scene.ground_truth is None:
            raise ValueError(f"scene {item.name} has no ground truth to evaluate against")
        outcome = self.check(item.references, item.detections, item.scene)
        evaluation = evaluate_scene(
            item.name,
            outcome.report.stage_detections,
            item.scene.ground_truth.labelled_boxes(),
            self.settings.iou_threshold,
        )
        return outcome, evaluation

    async def evaluate_scenes(
        self, items: Sequence[SceneInput]
    ) -> tuple[DatasetReport, list[CheckOutcome]]:
        """
        Evaluate a dataset with at most ``settings.workers`` scenes in flight.

        Returns:
            Tuple of (dataset report, per-scene outcomes), both in input order
        """
        semaphore = asyncio.Semaphore(self.settings.workers)

        async def run(item: SceneInput) -> tuple[CheckOutcome, SceneEvaluation]:
            async with semaphore:
                return await asyncio.to_thread(self.check_and_evaluate, item)

        logger.info("evaluation_started", scenes=len(items), workers=self.settings.workers)
        results = await asyncio.gather(*(run(item) for item in items))
        report = evaluate_dataset([evaluation for _, evaluation in results])
        return report, [outcome for outcome, _ in results]

    def evaluate(self, items: Sequence[SceneInput]) -> DatasetReport:
        """Blocking wrapper around :meth:`evaluate_scenes`."""
        report, _ = asyncio.run(self.evaluate_scenes(items))
        return report
