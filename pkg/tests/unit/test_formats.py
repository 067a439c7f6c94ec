"""Unit tests for file formats."""

import json

import numpy as np
import pytest

from planogram_compliance.errors import FormatError
from planogram_compliance.formats.documents import (
    Manifest,
    ManifestScene,
    PlanogramDocument,
    dataset_report_to_document,
    load_detections,
    load_ground_truth,
    load_manifest,
    load_planogram,
    observed_to_document,
    planogram_from_document,
    save_detections,
    save_ground_truth,
    save_manifest,
    save_planogram,
)
from planogram_compliance.formats.images import load_templates, read_pgm, save_templates, write_pgm
from planogram_compliance.formats.svg import ISSUE_COLOUR, MATCHED_COLOUR, render_overlay
from planogram_compliance.graph.builder import build_observed
from planogram_compliance.models.evaluation import DatasetReport, EvalResult, SceneEvaluation, Stage
from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.verification import ComplianceIssue, IssueReason
from planogram_compliance.simulation.planogram import gen_planogram
from planogram_compliance.simulation.scene import gen_scene


def _write_json(path, document) -> None:
    path.write_text(json.dumps(document), encoding="utf-8")


class TestPlanogramFiles:
    """Tests for planogram documents."""

    def test_round_trip(self, tmp_path):
        """Test save then load of a generated planogram."""
        planogram = gen_planogram(2, 4, 8, seed=1, name="aisle")
        save_planogram(planogram, tmp_path / "planogram.json")
        loaded = load_planogram(tmp_path / "planogram.json")
        assert loaded.name == "aisle"
        assert loaded.node_ids == planogram.node_ids
        assert sorted(loaded.edges) == sorted(planogram.edges)
        assert loaded.products == planogram.products

    def test_edges_derived_from_the_grid(self):
        """Test that a document without edges gets 8-neighbourhood edges."""
        doc = PlanogramDocument.model_validate(
            {
                "nodes": [
                    {"node_id": "a", "product": "A", "row": 0, "col": 0},
                    {"node_id": "b", "product": "B", "row": 0, "col": 1},
                    {"node_id": "c", "product": "C", "row": 1, "col": 1},
                ]
            }
        )
        planogram = planogram_from_document(doc)
        assert planogram.neighbors("a") == {"E": "b", "SE": "c"}
        assert planogram.neighbors("c") == {"N": "b", "NW": "a"}

    def test_metric_sizes(self):
        """Test per-product and per-node metric sizes."""
        doc = PlanogramDocument.model_validate(
            {
                "products": [{"id": "A", "width_mm": 80, "height_mm": 200}],
                "nodes": [
                    {"node_id": "a", "product": "A", "row": 0, "col": 0},
                    {"node_id": "b", "product": "A", "row": 0, "col": 1, "width_mm": 40, "height_mm": 100},
                ],
            }
        )
        planogram = planogram_from_document(doc)
        assert planogram.metric_size("a").width_mm == 80
        assert planogram.metric_size("b").height_mm == 100

    def test_asymmetric_edges_rejected(self, tmp_path):
        """Test that a one-way edge list is fatal."""
        path = tmp_path / "bad.json"
        _write_json(
            path,
            {
                "nodes": [
                    {"node_id": "a", "product": "A", "row": 0, "col": 0},
                    {"node_id": "b", "product": "B", "row": 0, "col": 1},
                ],
                "edges": [["a", "E", "b"]],
            },
        )
        with pytest.raises(FormatError, match="invalid planogram graph"):
            load_planogram(path)

    def test_disconnected_rejected(self):
        """Test that two separate islands are fatal."""
        doc = PlanogramDocument.model_validate(
            {
                "nodes": [
                    {"node_id": "a", "product": "A", "row": 0, "col": 0},
                    {"node_id": "b", "product": "B", "row": 0, "col": 5},
                ]
            }
        )
        with pytest.raises(FormatError, match="disconnected"):
            planogram_from_document(doc)

    @pytest.mark.parametrize(
        "content",
        [
            "not json",
            '{"nodes": "x"}',
            '{"nodes": [{"node_id": "a", "product": "A", "row": 0}]}',
            '{"nodes": [{"node_id": "a", "product": "A", "row": 0, "col": 0},'
            ' {"node_id": "a", "product": "B", "row": 0, "col": 1}]}',
        ],
    )
    def test_malformed(self, tmp_path, content):
        """Test parse and validation failures."""
        path = tmp_path / "planogram.json"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(FormatError, match="planogram.json"):
            load_planogram(path)

    def test_missing_file(self, tmp_path):
        """Test an unreadable path."""
        with pytest.raises(FormatError, match="cannot read file"):
            load_planogram(tmp_path / "absent.json")


class TestDetectionFiles:
    """Tests for detection documents."""

    def test_round_trip_with_image_size(self, tmp_path, make_detections):
        """Test that boxes, ids and the image size survive a round trip."""
        detections = make_detections([["A", "B"]])
        save_detections(detections, tmp_path / "d.json", width=80, height=40)
        loaded = load_detections(tmp_path / "d.json")
        assert list(loaded.detections) == detections
        assert (loaded.width, loaded.height) == (80, 40)

    def test_defaults(self, tmp_path):
        """Test optional image size and confidence."""
        path = tmp_path / "d.json"
        _write_json(path, {"detections": [{"det_id": "x", "product": "A", "x": 0, "y": 0, "w": 5, "h": 5}]})
        loaded = load_detections(path)
        assert loaded.width is None
        assert loaded.detections[0].confidence == 1.0

    def test_invalid_box(self, tmp_path):
        """Test that zero-width boxes are rejected."""
        path = tmp_path / "d.json"
        _write_json(path, {"detections": [{"det_id": "x", "product": "A", "x": 0, "y": 0, "w": 0, "h": 5}]})
        with pytest.raises(FormatError):
            load_detections(path)


class TestGroundTruthFiles:
    """Tests for ground-truth documents."""

    def test_round_trip(self, tmp_path):
        """Test save then load against the same planogram."""
        planogram = gen_planogram(2, 3, 6, seed=0)
        gt = gen_scene(planogram, 40, 40, void_rate=0.3, seed=2)
        save_ground_truth(gt, tmp_path / "gt.json")
        assert load_ground_truth(tmp_path / "gt.json", planogram) == gt

    def test_product_defaults_to_the_plan(self, tmp_path):
        """Test that items without a label take the planned product."""
        planogram = gen_planogram(1, 1, 3, seed=0)
        path = tmp_path / "gt.json"
        _write_json(
            path,
            {
                "image": {"width": 40, "height": 40},
                "items": [{"node_id": "n000_000", "x": 0, "y": 0, "w": 36, "h": 36}],
            },
        )
        gt = load_ground_truth(path, planogram)
        assert gt.items[0].product == planogram.product_of("n000_000")

    def test_partition_violation(self, tmp_path):
        """Test that nodes missing from the ground truth are rejected."""
        planogram = gen_planogram(1, 2, 3, seed=0)
        path = tmp_path / "gt.json"
        _write_json(path, {"image": {"width": 80, "height": 40}, "absent": ["n000_000"]})
        with pytest.raises(FormatError, match="partition"):
            load_ground_truth(path, planogram)

    def test_items_and_absent_only(self, tmp_path):
        """Test the bare simulator layout: no image size, frame from the item extent."""
        planogram = gen_planogram(1, 2, 3, seed=0)
        path = tmp_path / "gt.json"
        _write_json(
            path,
            {"items": [{"node_id": "n000_000", "x": 2, "y": 2, "w": 36, "h": 36.5}], "absent": ["n000_001"]},
        )
        gt = load_ground_truth(path, planogram)
        assert [i.node_id for i in gt.items] == ["n000_000"]
        assert gt.absent == ("n000_001",)
        assert (gt.width, gt.height) == (38, 39)

    def test_frame_from_caller(self, tmp_path):
        """Test that the detection file's image size fills in a missing frame."""
        planogram = gen_planogram(1, 2, 3, seed=0)
        path = tmp_path / "gt.json"
        _write_json(
            path,
            {"items": [{"node_id": "n000_000", "x": 0, "y": 0, "w": 36, "h": 36}], "absent": ["n000_001"]},
        )
        gt = load_ground_truth(path, planogram, width=80, height=40)
        assert (gt.width, gt.height) == (80, 40)

    def test_annotation_layout(self, tmp_path):
        """Test detection-style annotations linked to nodes; unlisted nodes are empty."""
        planogram = gen_planogram(1, 3, 6, seed=0)
        path = tmp_path / "gt.json"
        _write_json(
            path,
            {
                "image": {"width": 120, "height": 40},
                "detections": [
                    {"det_id": "d0", "product": "P9", "node_id": "n000_000", "x": 0, "y": 0, "w": 36, "h": 36},
                    {"det_id": "d1", "node_id": "n000_002", "x": 80, "y": 0, "w": 36, "h": 36},
                ],
            },
        )
        gt = load_ground_truth(path, planogram)
        assert [(i.node_id, i.product) for i in gt.items] == [
            ("n000_000", "P9"),
            ("n000_002", planogram.product_of("n000_002")),
        ]
        assert gt.absent == ("n000_001",)
        assert (gt.width, gt.height) == (120, 40)

    def test_nothing_to_size_the_frame(self, tmp_path):
        """Test that an empty scene needs an image size from somewhere."""
        planogram = gen_planogram(1, 1, 3, seed=0)
        path = tmp_path / "gt.json"
        _write_json(path, {"absent": ["n000_000"]})
        with pytest.raises(FormatError, match="no image size"):
            load_ground_truth(path, planogram)

    def test_unknown_node(self, tmp_path):
        """Test an item naming a node the planogram does not have."""
        planogram = gen_planogram(1, 1, 3, seed=0)
        path = tmp_path / "gt.json"
        _write_json(
            path,
            {"image": {"width": 40, "height": 40}, "items": [{"node_id": "zz", "x": 0, "y": 0, "w": 1, "h": 1}]},
        )
        with pytest.raises(FormatError):
            load_ground_truth(path, planogram)


class TestManifest:
    """Tests for dataset manifests."""

    def test_round_trip(self, tmp_path):
        """Test save then load."""
        manifest = Manifest(
            planograms=["planogram.json"],
            scenes=[ManifestScene(name="s0", detections="s0/d.json", ground_truth="s0/gt.json")],
        )
        save_manifest(manifest, tmp_path / "manifest.json")
        assert load_manifest(tmp_path / "manifest.json") == manifest

    def test_bad_planogram_index(self, tmp_path):
        """Test a scene pointing past the planogram list."""
        path = tmp_path / "manifest.json"
        _write_json(
            path,
            {
                "planograms": ["p.json"],
                "scenes": [{"name": "s0", "detections": "d", "ground_truth": "g", "planogram": 1}],
            },
        )
        with pytest.raises(FormatError, match="refers to planogram 1"):
            load_manifest(path)

    def test_requires_a_planogram(self, tmp_path):
        """Test that the planogram list may not be empty."""
        path = tmp_path / "manifest.json"
        _write_json(path, {"planograms": [], "scenes": []})
        with pytest.raises(FormatError):
            load_manifest(path)


class TestImages:
    """Tests for graymaps and template libraries."""

    def test_pgm_round_trip(self, tmp_path):
        """Test write then read of a uint8 grid."""
        image = np.arange(12 * 7, dtype=np.uint8).reshape(7, 12)
        write_pgm(tmp_path / "scene.pgm", image)
        assert (tmp_path / "scene.pgm").read_bytes().startswith(b"P5")
        assert np.array_equal(read_pgm(tmp_path / "scene.pgm"), image)

    def test_pgm_requires_2d(self, tmp_path):
        """Test that colour arrays are refused."""
        with pytest.raises(ValueError, match="2-D"):
            write_pgm(tmp_path / "x.pgm", np.zeros((2, 2, 3)))

    def test_unreadable_pgm(self, tmp_path):
        """Test a file that is not an image."""
        path = tmp_path / "x.pgm"
        path.write_text("hello", encoding="utf-8")
        with pytest.raises(FormatError, match="cannot read graymap"):
            read_pgm(path)

    def test_templates(self, tmp_path):
        """Test the per-product template directory."""
        templates = {"p001": np.full((3, 4), 9, np.uint8), "p002": np.eye(5, dtype=np.uint8) * 200}
        save_templates(templates, tmp_path / "templates")
        loaded = load_templates(tmp_path / "templates")
        assert sorted(loaded) == ["p001", "p002"]
        assert np.array_equal(loaded["p002"], templates["p002"])

    def test_missing_template_directory(self, tmp_path):
        """Test the directory check."""
        with pytest.raises(FormatError, match="not found"):
            load_templates(tmp_path / "nowhere")


class TestDocuments:
    """Tests for result documents."""

    def test_observed_document(self, make_detections):
        """Test node and edge listing of an observed graph."""
        observed = build_observed(make_detections([["A", "B"]]))
        doc = observed_to_document(observed)
        assert [n["node_id"] for n in doc["nodes"]] == ["o00", "o01"]
        assert doc["edges"] == [["o00", "E", "o01"], ["o01", "W", "o00"]]

    def test_dataset_report_document(self):
        """Test optional per-scene rows."""
        row = SceneEvaluation(scene="s0", stages={Stage.DETECTION: EvalResult.from_counts(1, 0, 0)})
        report = DatasetReport(scene_count=1, stages=dict(row.stages), scenes=(row,))
        full = dataset_report_to_document(report)
        assert full["stages"]["detection"]["precision"] == 1.0
        assert full["scenes"][0]["scene"] == "s0"
        assert "scenes" not in dataset_report_to_document(report, include_scenes=False)


class TestOverlay:
    """Tests for SVG overlays."""

    def test_colours(self, make_detections):
        """Test a green box per assigned item and a red one per located issue."""
        observed = build_observed(make_detections([["A", "B"]]))
        issues = [
            ComplianceIssue(
                ref_node="r02",
                expected_product="C",
                expected_roi=BBox(x=80, y=0, w=36, h=36),
                reason=IssueReason.NO_PROPOSALS,
            ),
            ComplianceIssue(ref_node="r03", expected_product="D", reason=IssueReason.NO_PROPOSALS),
        ]
        svg = render_overlay(160, 40, observed, ["o00", "o01"], issues, image_href="scene.pgm")
        assert svg.count(f'stroke="{MATCHED_COLOUR}"') == 2
        assert svg.count(f'stroke="{ISSUE_COLOUR}"') == 1
        assert "r02: C (no-proposals)" in svg
        assert 'href="scene.pgm"' in svg
        assert svg.startswith("<svg")
