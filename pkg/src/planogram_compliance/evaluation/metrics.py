"""PASCAL-style detection matching and per-stage macro averages."""

from collections.abc import Mapping, Sequence

import numpy as np
import structlog

from planogram_compliance.errors import EmptyDatasetError
from planogram_compliance.models.evaluation import (
    DatasetReport,
    DetectionMatch,
    EvalResult,
    SceneEvaluation,
    Stage,
)
from planogram_compliance.models.geometry import BBox, iou
from planogram_compliance.models.planogram import Detection

logger = structlog.get_logger()

DEFAULT_IOU_THRESHOLD = 0.5

LabelledBox = tuple[str, BBox]


def match_detections(
    detections: Sequence[Detection],
    ground_truth: Sequence[LabelledBox],
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> DetectionMatch:
    """
    One-to-one greedy matching of detections to ground-truth boxes.

    Only same-label pairs with IoU strictly above ``iou_threshold`` are
    candidates. They are taken by descending IoU (ties by det_id, then
    ground-truth index), each detection and each box at most once.
    """
    candidates: list[tuple[float, str, int]] = []
    for det in detections:
        for index, (product, box) in enumerate(ground_truth):
            if product != det.product:
                continue
            overlap = iou(det.bbox, box)
            if overlap > iou_threshold:
                candidates.append((overlap, det.det_id, index))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))

    used_dets: set[str] = set()
    used_gt: set[int] = set()
    pairing: list[tuple[str, int]] = []
    for _, det_id, index in candidates:
        if det_id in used_dets or index in used_gt:
            continue
        used_dets.add(det_id)
        used_gt.add(index)
        pairing.append((det_id, index))

    tp = len(pairing)
    return DetectionMatch(
        tp=tp,
        fp=len(detections) - tp,
        fn=len(ground_truth) - tp,
        pairing=tuple(sorted(pairing)),
    )


def evaluate_scene(
    scene: str,
    stage_detections: Mapping[Stage, Sequence[Detection]],
    ground_truth: Sequence[LabelledBox],
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> SceneEvaluation:
    """Metrics of every pipeline stage of one image against the same ground truth."""
    return SceneEvaluation(
        scene=scene,
        stages={
            stage: match_detections(dets, ground_truth, iou_threshold).result()
            for stage, dets in stage_detections.items()
        },
    )


def macro_average(results: Sequence[EvalResult]) -> EvalResult:
    """Arithmetic mean of per-image metrics (and counts)."""
    if not results:
        raise EmptyDatasetError()
    table = np.array(
        [[r.tp, r.fp, r.fn, r.precision, r.recall, r.f_measure] for r in results],
        dtype=np.float64,
    )
    tp, fp, fn, precision, recall, f_measure = table.mean(axis=0)
    return EvalResult(
        tp=float(tp),
        fp=float(fp),
        fn=float(fn),
        precision=float(precision),
        recall=float(recall),
        f_measure=float(f_measure),
    )


def evaluate_dataset(scenes: Sequence[SceneEvaluation], keep_rows: bool = True) -> DatasetReport:
    """
    Macro-average each stage over the scenes that report it.

    Raises:
        EmptyDatasetError: If ``scenes`` is empty
    """
    if not scenes:
        raise EmptyDatasetError()
    stages = {
        stage: macro_average([s.stages[stage] for s in scenes if stage in s.stages])
        for stage in Stage
        if any(stage in s.stages for s in scenes)
    }
    logger.info(
        "dataset_evaluated",
        scenes=len(scenes),
        **{f"{stage.value}_f": round(result.f_measure, 4) for stage, result in stages.items()},
    )
    return DatasetReport(
        scene_count=len(scenes),
        stages=stages,
        scenes=tuple(scenes) if keep_rows else (),
    )
