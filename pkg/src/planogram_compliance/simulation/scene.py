"""Ground-truth shelf scenes laid out from a planogram."""

import math

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.planogram import GridExtent, ReferencePlanogram
from planogram_compliance.models.scene import GroundTruthItem, GroundTruthScene
from planogram_compliance.simulation.rng import make_rng

ITEM_FILL = 0.9


def gen_scene(
    planogram: ReferencePlanogram,
    cell_w: float,
    cell_h: float,
    void_rate: float = 0.0,
    seed: int = 0,
    view: GridExtent | None = None,
) -> GroundTruthScene:
    """
    Place each facing at ``(col * cell_w, row * cell_h)`` with 90% of the cell size.

    Each facing is independently left empty with probability ``void_rate``.
    With ``view`` only that part of the grid is photographed: positions are
    relative to the view origin and facings outside it are out of view.
    """
    if cell_w <= 0 or cell_h <= 0:
        raise ValueError("cell sizes must be positive")
    if not 0.0 <= void_rate <= 1.0:
        raise ValueError(f"void_rate must be in [0, 1]: {void_rate}")
    extent = planogram.extent()
    if extent is None:
        raise ValueError("planogram has no nodes")
    view = view or extent
    rng = make_rng(seed, "scene", planogram.name)

    items: list[GroundTruthItem] = []
    absent: list[str] = []
    out_of_view: list[str] = []
    for node_id in planogram.node_ids:
        node = planogram.node(node_id)
        if not view.contains(node.row, node.col):
            out_of_view.append(node_id)
            continue
        if rng.random() < void_rate:
            absent.append(node_id)
            continue
        items.append(
            GroundTruthItem(
                node_id=node_id,
                product=node.product,
                bbox=BBox(
                    x=(node.col - view.min_col) * cell_w,
                    y=(node.row - view.min_row) * cell_h,
                    w=cell_w * ITEM_FILL,
                    h=cell_h * ITEM_FILL,
                ),
            )
        )

    return GroundTruthScene(
        planogram=planogram,
        items=tuple(items),
        absent=tuple(absent),
        out_of_view=tuple(out_of_view),
        width=math.ceil(view.cols * cell_w),
        height=math.ceil(view.rows * cell_h),
    )
