"""Integration tests for the build -> match -> verify pipeline."""

import pytest

from planogram_compliance.config import MatcherName, Settings
from planogram_compliance.models.evaluation import Stage
from planogram_compliance.models.matching import AssignmentSource
from planogram_compliance.models.params import NoiseParams
from planogram_compliance.models.planogram import GridExtent
from planogram_compliance.orchestrator import ComplianceChecker, SceneInput
from planogram_compliance.simulation.dataset import DatasetSpec, simulate_dataset
from planogram_compliance.simulation.noise import corrupt
from planogram_compliance.simulation.planogram import gen_planogram
from planogram_compliance.simulation.render import render_scene
from planogram_compliance.simulation.scene import gen_scene
from planogram_compliance.verification.context import SceneContext


@pytest.fixture
def checker(settings) -> ComplianceChecker:
    return ComplianceChecker(settings)


class TestCheck:
    """Tests for ComplianceChecker.check."""

    def test_compliant_shelf(self, checker, clean_scene):
        """Test that a noise-free shelf has no issues."""
        gt, detections = clean_scene
        outcome = checker.check([gt.planogram], detections, SceneContext(ground_truth=gt))
        report = outcome.report

        assert report.is_compliant
        assert report.planogram == "clean"
        assert len(report.assignments) == len(gt.planogram)
        assert report.missing_after_matching == ()
        assert len(report.stage_detections[Stage.VERIFICATION]) == len(detections)
        assert report.timings.total_s >= report.timings.match_s

    def test_void_facing_is_flagged(self, checker):
        """Test that a facing left empty is reported and the rest verified."""
        planogram = gen_planogram(3, 5, 24, seed=6, name="voids")
        gt = gen_scene(planogram, 40, 40, void_rate=0.2, seed=6)
        detections = corrupt(gt, NoiseParams())
        outcome = checker.check([planogram], detections, SceneContext(ground_truth=gt))

        flagged = {i.ref_node for i in outcome.report.issues}
        assigned = {a.ref_node for a in outcome.report.assignments}
        assert len(flagged) == len(gt.absent)
        assert assigned | flagged == set(planogram.node_ids)
        assert not assigned & flagged

    def test_missed_detections_are_recovered(self, checker):
        """Test that the oracle matcher restores detector misses."""
        planogram = gen_planogram(3, 5, 24, seed=12, name="misses")
        gt = gen_scene(planogram, 40, 40, seed=12)
        detections = corrupt(gt, NoiseParams(miss_rate=0.15, seed=12))
        outcome = checker.check([planogram], detections, SceneContext(ground_truth=gt))

        verified = [a for a in outcome.report.assignments if a.source == AssignmentSource.VERIFICATION]
        assert len(verified) == len(gt.items) - len(detections)
        assert outcome.report.is_compliant

    def test_template_matcher_on_rendered_scene(self):
        """Test the ZNCC matcher on a rendered image with detector misses."""
        settings = Settings(_env_file=None, matcher=MatcherName.ZNCC)
        checker = ComplianceChecker(settings)
        planogram = gen_planogram(2, 5, 24, seed=13, name="render")
        gt = gen_scene(planogram, 40, 40, seed=13)
        image, templates = render_scene(gt)
        detections = corrupt(gt, NoiseParams(miss_rate=0.2, seed=13))
        outcome = checker.check([planogram], detections, SceneContext(image=image, templates=templates))

        assert len(outcome.report.assignments) + len(outcome.report.issues) == len(planogram)
        assert len(outcome.report.assignments) >= len(detections)

    def test_best_planogram_is_chosen(self, checker):
        """Test localisation across several candidate aisles."""
        aisles = [gen_planogram(2, 6, 24, seed=40 + i, name=f"aisle-{i}") for i in range(3)]
        gt = gen_scene(aisles[2], 40, 40, seed=2)
        outcome = checker.check(aisles, corrupt(gt, NoiseParams()), SceneContext(ground_truth=gt))
        assert outcome.report.best_ref_index == 2
        assert outcome.report.planogram == "aisle-2"

    def test_out_of_view_facings(self, checker):
        """Test that facings outside the photographed part are not issues."""
        planogram = gen_planogram(2, 8, 24, seed=5, name="wide")
        view = GridExtent(min_row=0, min_col=0, max_row=1, max_col=3)
        gt = gen_scene(planogram, 40, 40, seed=5, view=view)
        outcome = checker.check([planogram], corrupt(gt, NoiseParams()), SceneContext(ground_truth=gt))

        assert outcome.report.is_compliant
        assert set(outcome.report.out_of_view) == set(gt.out_of_view)


class TestEvaluate:
    """Tests for dataset evaluation."""

    def _items(self, scenes):
        return [
            SceneInput(
                name=f"scene-{s.index:03d}",
                references=(s.planogram,),
                detections=s.detections,
                scene=SceneContext(ground_truth=s.ground_truth),
            )
            for s in scenes
        ]

    def test_noise_free_dataset(self, checker):
        """Test perfect scores on noise-free scenes."""
        scenes = simulate_dataset(DatasetSpec(scenes=4, seed=2), NoiseParams())
        report = checker.evaluate(self._items(scenes))
        assert report.scene_count == 4
        for stage in Stage:
            assert report.stages[stage].precision == 1.0
            assert report.stages[stage].recall == 1.0

    @pytest.mark.asyncio
    async def test_evaluate_scenes_keeps_order(self, settings):
        """Test concurrent evaluation returns rows in input order."""
        checker = ComplianceChecker(settings.model_copy(update={"workers": 2}))
        scenes = simulate_dataset(DatasetSpec(scenes=5, seed=3), NoiseParams(fp_rate=0.2, seed=3))
        report, outcomes = await checker.evaluate_scenes(self._items(scenes))
        assert [row.scene for row in report.scenes] == [f"scene-{i:03d}" for i in range(5)]
        assert [o.report.planogram for o in outcomes] == [s.planogram.name for s in scenes]

    def test_requires_ground_truth(self, checker, clean_scene):
        """Test that scenes without ground truth cannot be scored."""
        gt, detections = clean_scene
        item = SceneInput(name="bare", references=(gt.planogram,), detections=tuple(detections))
        with pytest.raises(ValueError, match="no ground truth"):
            checker.check_and_evaluate(item)
