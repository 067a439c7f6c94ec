"""Unit tests for observed-graph construction."""

import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planogram_compliance.errors import DegenerateOffsetError, DuplicateDetectionError
from planogram_compliance.graph.builder import build_observed, classify_direction
from planogram_compliance.graph.topology import connected_components, to_networkx
from planogram_compliance.graph.validation import validate_graph
from planogram_compliance.models.geometry import BBox, Direction
from planogram_compliance.models.params import BuilderParams, NoiseParams
from planogram_compliance.models.planogram import Detection
from planogram_compliance.simulation.noise import corrupt
from planogram_compliance.simulation.planogram import gen_planogram
from planogram_compliance.simulation.scene import gen_scene


def _box(cx: float, cy: float, size: float) -> BBox:
    return BBox.from_center(cx, cy, size, size)


class TestClassifyDirection:
    """Tests for sector classification."""

    @pytest.mark.parametrize(
        "to_center,expected",
        [
            ((10, 0), Direction.E),
            ((10, -10), Direction.NE),
            ((10, 1), Direction.E),
            ((0, -10), Direction.N),
            ((-10, -10), Direction.NW),
            ((-10, 0), Direction.W),
            ((-10, 10), Direction.SW),
            ((0, 10), Direction.S),
            ((10, 10), Direction.SE),
        ],
    )
    def test_sectors(self, to_center, expected):
        """Test each sector in y-down image coordinates."""
        assert classify_direction((0, 0), to_center) == expected

    def test_boundary_is_half_open(self):
        """Test that angles just past 22.5 degrees belong to NE."""
        above = math.tan(math.radians(22.5 + 1e-6))
        below = math.tan(math.radians(22.5 - 1e-6))
        assert classify_direction((0, 0), (1.0, -above)) == Direction.NE
        assert classify_direction((0, 0), (1.0, -below)) == Direction.E
        assert classify_direction((0, 0), (1.0, below)) == Direction.E

    def test_degenerate_offset(self):
        """Test that coincident centres are an error."""
        with pytest.raises(DegenerateOffsetError, match="degenerate offset"):
            classify_direction((3, 4), (3, 4))

    def test_narrow_sectors_leave_gaps(self):
        """Test that sectors narrower than 22.5 degrees may return None."""
        assert classify_direction((0, 0), (10, -3), sector_half_width_deg=10) is None

    @given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
    def test_default_sectors_tile_the_circle(self, dx, dy):
        """Test that any non-zero offset gets a direction."""
        if dx == 0 and dy == 0:
            return
        assert classify_direction((0, 0), (dx, dy)) is not None


class TestBuildObserved:
    """Tests for build_observed."""

    def test_lattice_matches_reference_grid(self, make_detections):
        """Test a 2x2 lattice of 36 px boxes at 40 px pitch."""
        observed = build_observed(make_detections([["A", "B"], ["C", "D"]]))
        assert observed.neighbors("o00") == {
            Direction.E: "o01",
            Direction.S: "o10",
            Direction.SE: "o11",
        }
        assert observed.neighbors("o01") == {
            Direction.W: "o00",
            Direction.S: "o11",
            Direction.SW: "o10",
        }
        assert len(observed.edges) == 12
        assert validate_graph(observed) == []

    def test_distant_column_is_not_linked(self):
        """Test that the distance threshold drops far-away boxes."""
        detections = [
            Detection(det_id="a", product="A", bbox=_box(20, 20, 20)),
            Detection(det_id="b", product="B", bbox=_box(200, 20, 20)),
            Detection(det_id="c", product="C", bbox=_box(20, 60, 20)),
            Detection(det_id="d", product="D", bbox=_box(200, 60, 20)),
        ]
        observed = build_observed(detections, BuilderParams(alpha=1.2))
        # 180 px across and 40 px down, both above 1.2 * 28.3 px.
        assert observed.edges == ()

    def test_closest_box_wins_a_contested_slot(self):
        """Test three collinear boxes where B and C both lie east of A."""
        detections = [
            Detection(det_id="A", product="A", bbox=_box(0, 0, 40)),
            Detection(det_id="B", product="B", bbox=_box(40, 0, 40)),
            Detection(det_id="C", product="C", bbox=_box(55, 0, 40)),
        ]
        observed = build_observed(detections)
        assert observed.neighbors("A") == {Direction.E: "B"}
        assert observed.neighbors("B") == {Direction.W: "A", Direction.E: "C"}
        assert validate_graph(observed) == []

    def test_duplicate_detection_ids(self):
        """Test that duplicated det_ids are refused."""
        box = _box(0, 0, 10)
        with pytest.raises(DuplicateDetectionError, match="duplicate det_id: x"):
            build_observed(
                [
                    Detection(det_id="x", product="A", bbox=box),
                    Detection(det_id="x", product="B", bbox=_box(20, 0, 10)),
                ]
            )

    def test_empty_input(self):
        """Test that no detections give an empty graph."""
        observed = build_observed([])
        assert len(observed) == 0
        assert observed.edges == ()

    def test_permutation_invariance(self):
        """Test that input order does not change the graph."""
        gt = gen_scene(gen_planogram(3, 4, 24, seed=5), 40, 40, seed=5)
        detections = corrupt(gt, NoiseParams(fp_rate=0.3, jitter_sigma=3.0, seed=5))
        shuffled = list(detections)
        random.Random(0).shuffle(shuffled)
        assert build_observed(detections) == build_observed(shuffled)

    @settings(max_examples=30, deadline=None)
    @given(
        st.integers(1, 4),
        st.integers(1, 6),
        st.integers(0, 2**32 - 1),
    )
    def test_noise_free_scene_is_isomorphic_to_reference(self, rows, cols, seed):
        """Test that a clean rendering rebuilds the planned grid."""
        planogram = gen_planogram(rows, cols, 24, seed=seed)
        gt = gen_scene(planogram, 40, 40, seed=seed)
        observed = build_observed(corrupt(gt, NoiseParams(seed=seed)))

        assert nx.is_isomorphic(
            to_networkx(planogram),
            to_networkx(observed),
            node_match=lambda a, b: a["product"] == b["product"],
        )
        assert validate_graph(observed) == []
        # Directed edge labels survive too: every reference edge has a counterpart.
        det_at = {
            (round(observed.bbox_of(n).x / 40), round(observed.bbox_of(n).y / 40)): n
            for n in observed.node_ids
        }
        for edge in planogram.edges:
            src, dst = planogram.node(edge.source), planogram.node(edge.target)
            obs_src = det_at[(src.col, src.row)]
            assert observed.neighbors(obs_src)[edge.direction] == det_at[(dst.col, dst.row)]

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_noisy_output_is_structurally_valid(self, seed):
        """Test slot uniqueness and symmetry under heavy noise."""
        gt = gen_scene(gen_planogram(3, 5, 24, seed=seed), 40, 40, seed=seed)
        noise = NoiseParams(miss_rate=0.2, fp_rate=0.5, confusion_rate=0.2, jitter_sigma=4, seed=seed)
        observed = build_observed(corrupt(gt, noise))
        assert validate_graph(observed) == []
        assert all(observed.degree(n) <= 8 for n in observed.node_ids)


class TestTopology:
    """Tests for topology helpers."""

    def test_connected_components_sorted(self, make_detections):
        """Test component order by smallest node id."""
        observed = build_observed(make_detections([["A", None, None, "B", "C"]]))
        assert connected_components(observed) == [frozenset({"o00"}), frozenset({"o03", "o04"})]
