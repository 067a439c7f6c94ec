"""Simulated scene ground truth."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.planogram import ReferencePlanogram


class GroundTruthItem(BaseModel):
    """A facing that is physically present in the image."""

    model_config = ConfigDict(frozen=True)

    node_id: str
    product: str
    bbox: BBox


class GroundTruthScene(BaseModel):
    """What a shelf image really contains.

    ``items``, ``absent`` and ``out_of_view`` partition the planogram's nodes.
    """

    model_config = ConfigDict(frozen=True)

    planogram: ReferencePlanogram
    items: tuple[GroundTruthItem, ...] = ()
    absent: tuple[str, ...] = ()
    out_of_view: tuple[str, ...] = ()
    width: int = Field(..., gt=0)
    height: int = Field(..., gt=0)

    @model_validator(mode="after")
    def _check_partition(self) -> "GroundTruthScene":
        present = [item.node_id for item in self.items]
        every = present + list(self.absent) + list(self.out_of_view)
        if len(every) != len(set(every)):
            raise ValueError("ground-truth node listed more than once")
        if set(every) != set(self.planogram.node_ids):
            raise ValueError("items, absent and out_of_view must partition the planogram nodes")
        return self

    def item_for(self, node_id: str) -> GroundTruthItem | None:
        for item in self.items:
            if item.node_id == node_id:
                return item
        return None

    def labelled_boxes(self) -> list[tuple[str, BBox]]:
        return [(item.product, item.bbox) for item in self.items]
