"""Shelf overlay drawings: verified items in green, compliance issues in red."""

from pathlib import Path
from xml.etree import ElementTree as ET

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.planogram import ObservedPlanogram
from planogram_compliance.models.verification import ComplianceIssue

MATCHED_COLOUR = "#1a9641"
ISSUE_COLOUR = "#d7191c"


def _rect(parent: ET.Element, box: BBox, colour: str, label: str) -> None:
    rect = ET.SubElement(
        parent,
        "rect",
        x=f"{box.x:.1f}",
        y=f"{box.y:.1f}",
        width=f"{box.w:.1f}",
        height=f"{box.h:.1f}",
        fill="none",
        stroke=colour,
        **{"stroke-width": "2"},
    )
    ET.SubElement(rect, "title").text = label


def render_overlay(
    width: float,
    height: float,
    observed: ObservedPlanogram,
    assigned_obs_nodes: list[str],
    issues: list[ComplianceIssue] | tuple[ComplianceIssue, ...],
    image_href: str | None = None,
) -> str:
    """SVG document with one box per assigned item and one per located issue."""
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=f"{width:g}",
        height=f"{height:g}",
        viewBox=f"0 0 {width:g} {height:g}",
    )
    if image_href:
        ET.SubElement(svg, "image", href=image_href, x="0", y="0", width=f"{width:g}", height=f"{height:g}")
    matched = ET.SubElement(svg, "g", id="matched")
    for node_id in sorted(assigned_obs_nodes):
        _rect(matched, observed.bbox_of(node_id), MATCHED_COLOUR, f"{node_id}: {observed.product_of(node_id)}")
    flagged = ET.SubElement(svg, "g", id="issues")
    for issue in issues:
        if issue.expected_roi is not None:
            _rect(
                flagged,
                issue.expected_roi,
                ISSUE_COLOUR,
                f"{issue.ref_node}: {issue.expected_product} ({issue.reason.value})",
            )
    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"


def save_overlay(path: Path, document: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document, encoding="utf-8")
