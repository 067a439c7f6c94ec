"""File formats: JSON documents, graymap images and SVG overlays."""

from planogram_compliance.formats.documents import (
    DetectionFile,
    Manifest,
    ManifestScene,
    load_detections,
    load_ground_truth,
    load_manifest,
    load_planogram,
    match_to_document,
    observed_to_document,
    planogram_from_document,
    planogram_to_document,
    report_to_document,
    save_detections,
    save_ground_truth,
    save_manifest,
    save_planogram,
    save_report,
)
from planogram_compliance.formats.images import load_templates, read_pgm, save_templates, write_pgm
from planogram_compliance.formats.svg import render_overlay, save_overlay

__all__ = [
    "DetectionFile",
    "Manifest",
    "ManifestScene",
    "load_detections",
    "load_ground_truth",
    "load_manifest",
    "load_planogram",
    "load_templates",
    "match_to_document",
    "observed_to_document",
    "planogram_from_document",
    "planogram_to_document",
    "read_pgm",
    "render_overlay",
    "report_to_document",
    "save_detections",
    "save_ground_truth",
    "save_manifest",
    "save_overlay",
    "save_planogram",
    "save_report",
    "save_templates",
    "write_pgm",
]
