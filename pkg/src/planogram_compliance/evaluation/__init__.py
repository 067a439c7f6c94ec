"""Detection evaluation: IoU matching, precision/recall/F and dataset averages."""

from planogram_compliance.evaluation.metrics import (
    DEFAULT_IOU_THRESHOLD,
    evaluate_dataset,
    evaluate_scene,
    macro_average,
    match_detections,
)

__all__ = [
    "DEFAULT_IOU_THRESHOLD",
    "evaluate_dataset",
    "evaluate_scene",
    "macro_average",
    "match_detections",
]
