"""Everything a proposal matcher may look at for one shelf image."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.scene import GroundTruthScene


class SceneContext(BaseModel):
    """
    Image-side inputs of the verification stage.

    ``image`` and ``templates`` feed template matching, ``ground_truth``
    feeds the simulator-backed oracle matcher. ``width`` and ``height`` give
    the image frame when neither the image nor the ground truth does.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    image: np.ndarray | None = None
    templates: dict[str, np.ndarray] = Field(default_factory=dict)
    ground_truth: GroundTruthScene | None = None
    width: int | None = Field(default=None, gt=0)
    height: int | None = Field(default=None, gt=0)

    @property
    def frame(self) -> BBox | None:
        """The image rectangle, or ``None`` when the scene size is unknown."""
        if self.image is not None:
            h, w = self.image.shape[:2]
            return BBox(x=0, y=0, w=w, h=h)
        if self.ground_truth is not None:
            return BBox(x=0, y=0, w=self.ground_truth.width, h=self.ground_truth.height)
        if self.width is not None and self.height is not None:
            return BBox(x=0, y=0, w=self.width, h=self.height)
        return None
