"""JSON file formats for planograms, detections, ground truth, results and manifests.

Each file is described by a pydantic document model; loaders turn parse and
validation failures into ``FormatError`` so callers see one error type.
"""

import json
import math
from pathlib import Path
from typing import Any, TypeVar

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from planogram_compliance.errors import FormatError
from planogram_compliance.graph.topology import grid_edges
from planogram_compliance.graph.validation import validate_graph
from planogram_compliance.models.evaluation import DatasetReport
from planogram_compliance.models.geometry import BBox, Direction
from planogram_compliance.models.matching import MatchResult
from planogram_compliance.models.planogram import (
    Detection,
    Edge,
    MetricSize,
    ObservedPlanogram,
    Product,
    ReferenceNode,
    ReferencePlanogram,
)
from planogram_compliance.models.report import ComplianceReport
from planogram_compliance.models.scene import GroundTruthItem, GroundTruthScene

logger = structlog.get_logger()

DocT = TypeVar("DocT", bound=BaseModel)


class _Document(BaseModel):
    model_config = ConfigDict(extra="ignore")


class ImageSize(_Document):
    width: int = Field(..., gt=0)
    height: int = Field(..., gt=0)


class ProductEntry(_Document):
    id: str
    width_mm: float | None = Field(default=None, gt=0)
    height_mm: float | None = Field(default=None, gt=0)
    category: int | None = None


class NodeEntry(_Document):
    node_id: str
    product: str
    row: int
    col: int
    width_mm: float | None = Field(default=None, gt=0)
    height_mm: float | None = Field(default=None, gt=0)


class PlanogramDocument(_Document):
    name: str = "planogram"
    products: list[ProductEntry] = Field(default_factory=list)
    nodes: list[NodeEntry]
    edges: list[tuple[str, Direction, str]] | None = None


class BoxEntry(_Document):
    x: float
    y: float
    w: float = Field(..., gt=0)
    h: float = Field(..., gt=0)

    def bbox(self) -> BBox:
        return BBox(x=self.x, y=self.y, w=self.w, h=self.h)


class DetectionEntry(BoxEntry):
    det_id: str
    product: str
    confidence: float = Field(default=1.0, ge=0)


class DetectionDocument(_Document):
    image: ImageSize | None = None
    detections: list[DetectionEntry]


class GroundTruthEntry(BoxEntry):
    node_id: str
    product: str | None = None


class GroundTruthDocument(_Document):
    """
    Ground truth as written by the simulator (``items``) or as a detection-style
    annotation file (``detections`` entries carrying ``node_id``).

    Without ``absent``, planned nodes that are neither present nor out of view
    are empty facings.
    """

    image: ImageSize | None = None
    items: list[GroundTruthEntry] = Field(default_factory=list)
    detections: list[GroundTruthEntry] = Field(default_factory=list)
    absent: list[str] | None = None
    out_of_view: list[str] = Field(default_factory=list)

    def entries(self) -> list[GroundTruthEntry]:
        return self.items + self.detections


class ManifestScene(_Document):
    name: str
    detections: str
    ground_truth: str
    planogram: int = Field(default=0, ge=0)
    image: str | None = None
    templates: str | None = None


class Manifest(_Document):
    """A dataset: planogram files plus one entry per scene; paths are relative to the manifest."""

    planograms: list[str] = Field(..., min_length=1)
    scenes: list[ManifestScene]


class DetectionFile(BaseModel):
    """Parsed detection file."""

    model_config = ConfigDict(frozen=True)

    detections: tuple[Detection, ...]
    width: int | None = None
    height: int | None = None


def _read(path: Path, model: type[DocT]) -> DocT:
    try:
        return model.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"{path}: cannot read file: {e}") from e
    except ValidationError as e:
        raise FormatError(f"{path}: {e}") from e


def _write(path: Path, document: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def _metric(width_mm: float | None, height_mm: float | None) -> MetricSize | None:
    if width_mm is None or height_mm is None:
        return None
    return MetricSize(width_mm=width_mm, height_mm=height_mm)


def planogram_from_document(doc: PlanogramDocument, source: str = "<memory>") -> ReferencePlanogram:
    """
    Build and validate a reference planogram.

    Missing edges are derived from grid adjacency. Structural violations
    (asymmetric edges, doubled direction slots, disconnection) are fatal.

    Raises:
        FormatError: If the document does not describe a valid planogram
    """
    try:
        products = {
            p.id: Product(id=p.id, metric_size=_metric(p.width_mm, p.height_mm), category=p.category)
            for p in doc.products
        }
        nodes = tuple(
            ReferenceNode(
                node_id=n.node_id,
                product=n.product,
                row=n.row,
                col=n.col,
                metric_size=_metric(n.width_mm, n.height_mm),
            )
            for n in doc.nodes
        )
        edges = (
            tuple(Edge(a, d, b) for a, d, b in doc.edges) if doc.edges is not None else grid_edges(nodes)
        )
        planogram = ReferencePlanogram(name=doc.name, products=products, nodes=nodes, edges=edges)
    except (ValidationError, ValueError) as e:
        raise FormatError(f"{source}: {e}") from e

    violations = validate_graph(planogram)
    if violations:
        detail = "; ".join(f"{v.kind.value}: {v.detail}" for v in violations[:5])
        raise FormatError(f"{source}: invalid planogram graph: {detail}")
    return planogram


def load_planogram(path: Path) -> ReferencePlanogram:
    planogram = planogram_from_document(_read(path, PlanogramDocument), str(path))
    logger.debug("planogram_loaded", path=str(path), nodes=len(planogram))
    return planogram


def planogram_to_document(planogram: ReferencePlanogram) -> dict[str, Any]:
    def size(metric: MetricSize | None) -> dict[str, float]:
        return {"width_mm": metric.width_mm, "height_mm": metric.height_mm} if metric else {}

    return {
        "name": planogram.name,
        "products": [
            {"id": p.id, **size(p.metric_size), **({"category": p.category} if p.category is not None else {})}
            for p in sorted(planogram.products.values(), key=lambda p: p.id)
        ],
        "nodes": [
            {"node_id": n.node_id, "product": n.product, "row": n.row, "col": n.col, **size(n.metric_size)}
            for n in sorted(planogram.nodes, key=lambda n: n.node_id)
        ],
        "edges": [[e.source, e.direction.value, e.target] for e in sorted(planogram.edges)],
    }


def save_planogram(planogram: ReferencePlanogram, path: Path) -> None:
    _write(path, planogram_to_document(planogram))


def load_detections(path: Path) -> DetectionFile:
    doc = _read(path, DetectionDocument)
    try:
        detections = tuple(
            Detection(det_id=d.det_id, product=d.product, bbox=d.bbox(), confidence=d.confidence)
            for d in doc.detections
        )
    except ValidationError as e:
        raise FormatError(f"{path}: {e}") from e
    return DetectionFile(
        detections=detections,
        width=doc.image.width if doc.image else None,
        height=doc.image.height if doc.image else None,
    )


def _box(box: BBox) -> dict[str, float]:
    return {"x": box.x, "y": box.y, "w": box.w, "h": box.h}


def detections_to_document(
    detections: list[Detection] | tuple[Detection, ...],
    width: int | None = None,
    height: int | None = None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {}
    if width is not None and height is not None:
        doc["image"] = {"width": width, "height": height}
    doc["detections"] = [
        {"det_id": d.det_id, "product": d.product, **_box(d.bbox), "confidence": d.confidence}
        for d in detections
    ]
    return doc


def save_detections(
    detections: list[Detection] | tuple[Detection, ...],
    path: Path,
    width: int | None = None,
    height: int | None = None,
) -> None:
    _write(path, detections_to_document(detections, width, height))


def _frame(
    doc: GroundTruthDocument, items: tuple[GroundTruthItem, ...], width: int | None, height: int | None
) -> tuple[int, int]:
    """Image size from the file, else from the caller, else the extent of the items."""
    if doc.image is not None:
        return doc.image.width, doc.image.height
    if width is not None and height is not None:
        return width, height
    if not items:
        raise ValueError("no image size and no items to infer it from")
    return (
        math.ceil(max(i.bbox.x2 for i in items)),
        math.ceil(max(i.bbox.y2 for i in items)),
    )


def load_ground_truth(
    path: Path,
    planogram: ReferencePlanogram,
    width: int | None = None,
    height: int | None = None,
) -> GroundTruthScene:
    """
    Load ground truth for ``planogram``.

    ``width`` and ``height`` (usually from the detection file) are used when
    the file carries no image size.

    Raises:
        FormatError: If the file is malformed or does not partition ``planogram``
    """
    doc = _read(path, GroundTruthDocument)
    try:
        items = tuple(
            GroundTruthItem(
                node_id=i.node_id,
                product=i.product or planogram.product_of(i.node_id),
                bbox=i.bbox(),
            )
            for i in doc.entries()
        )
        if doc.absent is None:
            listed = {i.node_id for i in items} | set(doc.out_of_view)
            absent = tuple(n for n in planogram.node_ids if n not in listed)
        else:
            absent = tuple(doc.absent)
        frame_w, frame_h = _frame(doc, items, width, height)
        return GroundTruthScene(
            planogram=planogram,
            items=items,
            absent=absent,
            out_of_view=tuple(doc.out_of_view),
            width=frame_w,
            height=frame_h,
        )
    except (ValidationError, KeyError, ValueError) as e:
        raise FormatError(f"{path}: {e}") from e


def ground_truth_to_document(gt: GroundTruthScene) -> dict[str, Any]:
    return {
        "image": {"width": gt.width, "height": gt.height},
        "items": [{"node_id": i.node_id, "product": i.product, **_box(i.bbox)} for i in gt.items],
        "absent": list(gt.absent),
        "out_of_view": list(gt.out_of_view),
    }


def save_ground_truth(gt: GroundTruthScene, path: Path) -> None:
    _write(path, ground_truth_to_document(gt))


def observed_to_document(observed: ObservedPlanogram) -> dict[str, Any]:
    """The observed graph in planogram notation; nodes carry det_id and bbox."""
    return {
        "nodes": [
            {"node_id": n.node_id, "det_id": n.detection.det_id, "product": n.product, **_box(n.bbox)}
            for n in sorted(observed.nodes, key=lambda n: n.node_id)
        ],
        "edges": [[e.source, e.direction.value, e.target] for e in sorted(observed.edges)],
    }


def match_to_document(result: MatchResult) -> dict[str, Any]:
    return {
        "assignments": [[a.ref_node, a.obs_node, a.score] for a in result.solution.assignments],
        "confidence": result.confidence,
        "missing_ref_nodes": sorted(result.missing_ref_nodes),
        "localization": result.localization.model_dump() if result.localization else None,
    }


def report_to_document(report: ComplianceReport, include_detections: bool = False) -> dict[str, Any]:
    doc = report.model_dump(mode="json", exclude={"stage_detections"})
    doc["compliant"] = report.is_compliant
    if include_detections:
        doc["stage_detections"] = {
            stage.value: detections_to_document(dets)["detections"]
            for stage, dets in report.stage_detections.items()
        }
    return doc


def save_report(report: ComplianceReport, path: Path, include_detections: bool = False) -> None:
    _write(path, report_to_document(report, include_detections))


def dataset_report_to_document(report: DatasetReport, include_scenes: bool = True) -> dict[str, Any]:
    return report.model_dump(mode="json", exclude=set() if include_scenes else {"scenes"})


def load_manifest(path: Path) -> Manifest:
    """
    Raises:
        FormatError: If the manifest is malformed or a scene names a missing planogram
    """
    manifest = _read(path, Manifest)
    for scene in manifest.scenes:
        if scene.planogram >= len(manifest.planograms):
            raise FormatError(f"{path}: scene {scene.name} refers to planogram {scene.planogram}")
    return manifest


def save_manifest(manifest: Manifest, path: Path) -> None:
    _write(path, manifest.model_dump(mode="json", exclude_none=True))
