"""Wall-clock budgets for matching and the full pipeline."""

import time

import pytest

from planogram_compliance.config import MatcherName, Settings
from planogram_compliance.graph.builder import build_observed
from planogram_compliance.matching.solver import solve
from planogram_compliance.models.params import NoiseParams
from planogram_compliance.models.planogram import GridExtent
from planogram_compliance.orchestrator import ComplianceChecker
from planogram_compliance.simulation.dataset import BENCHMARK_NOISE
from planogram_compliance.simulation.noise import corrupt
from planogram_compliance.simulation.planogram import gen_planogram
from planogram_compliance.simulation.render import render_scene
from planogram_compliance.simulation.scene import gen_scene
from planogram_compliance.verification.context import SceneContext

pytestmark = pytest.mark.slow


class TestPerformance:
    """Timing checks on a 100-facing aisle."""

    @pytest.fixture
    def aisle(self):
        return gen_planogram(10, 10, 24, seed=31, name="long-aisle")

    def test_solve_twelve_against_a_hundred(self, aisle):
        """Test that localising 12 detections in a 100-node planogram takes at most a second."""
        view = GridExtent(min_row=4, min_col=2, max_row=5, max_col=7)
        gt = gen_scene(aisle, 40, 40, seed=31, view=view)
        observed = build_observed(corrupt(gt, NoiseParams()))
        assert len(observed) == 12

        start = time.perf_counter()
        result = solve(aisle, observed)
        elapsed = time.perf_counter() - start

        assert elapsed <= 1.0
        assert (result.localization.min_col, result.localization.max_col) == (2, 7)

    def test_full_pipeline_with_templates(self, aisle):
        """Test build, match and ZNCC verification of one image within 15 seconds."""
        checker = ComplianceChecker(Settings(_env_file=None, matcher=MatcherName.ZNCC))
        gt = gen_scene(aisle, 40, 40, seed=32)
        image, templates = render_scene(gt)
        detections = corrupt(gt, BENCHMARK_NOISE.model_copy(update={"seed": 32}))

        start = time.perf_counter()
        outcome = checker.check([aisle], detections, SceneContext(image=image, templates=templates))
        elapsed = time.perf_counter() - start

        assert elapsed <= 15.0
        assert len(outcome.report.assignments) + len(outcome.report.issues) == len(aisle)
