"""Image-space geometry: boxes and the eight grid directions.

Coordinates follow the raster convention: x grows to the right, y grows
downward, so North means smaller y.
"""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class BBox(BaseModel):
    """Axis-aligned box in image pixels."""

    model_config = ConfigDict(frozen=True)

    x: float
    y: float
    w: float = Field(..., gt=0)
    h: float = Field(..., gt=0)

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2, self.y + self.h / 2)

    @property
    def diagonal(self) -> float:
        return math.hypot(self.w, self.h)

    @property
    def area(self) -> float:
        return self.w * self.h

    @classmethod
    def from_center(cls, cx: float, cy: float, w: float, h: float) -> "BBox":
        """Build a box of size ``w`` x ``h`` centred on ``(cx, cy)``."""
        return cls(x=cx - w / 2, y=cy - h / 2, w=w, h=h)

    def intersection_area(self, other: "BBox") -> float:
        ix = min(self.x2, other.x2) - max(self.x, other.x)
        iy = min(self.y2, other.y2) - max(self.y, other.y)
        if ix <= 0 or iy <= 0:
            return 0.0
        return ix * iy

    def intersects(self, other: "BBox") -> bool:
        return self.intersection_area(other) > 0

    def contains_point(self, px: float, py: float) -> bool:
        return self.x <= px <= self.x2 and self.y <= py <= self.y2

    def enlarged(self, margin: float) -> "BBox":
        """Grow by ``margin`` times the box size on every side, keeping the centre."""
        cx, cy = self.center
        return BBox.from_center(cx, cy, self.w * (1 + 2 * margin), self.h * (1 + 2 * margin))

    def center_distance(self, other: "BBox") -> float:
        (ax, ay), (bx, by) = self.center, other.center
        return math.hypot(bx - ax, by - ay)


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes, in [0, 1]."""
    inter = a.intersection_area(b)
    if inter == 0.0:
        return 0.0
    union = a.area + b.area - inter
    return min(1.0, inter / union)


class Direction(str, Enum):
    """The eight neighbour directions of a planogram grid."""

    N = "N"
    S = "S"
    E = "E"
    W = "W"
    NE = "NE"
    NW = "NW"
    SE = "SE"
    SW = "SW"

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITES[self]

    @property
    def grid_offset(self) -> tuple[int, int]:
        """(row, col) step of this direction on the integer grid."""
        return _GRID_OFFSETS[self]

    @property
    def unit_vector(self) -> tuple[float, float]:
        """Unit vector in image coordinates (y down)."""
        dr, dc = _GRID_OFFSETS[self]
        norm = math.hypot(dr, dc)
        return (dc / norm, dr / norm)


_OPPOSITES = {
    Direction.N: Direction.S,
    Direction.S: Direction.N,
    Direction.E: Direction.W,
    Direction.W: Direction.E,
    Direction.NE: Direction.SW,
    Direction.SW: Direction.NE,
    Direction.NW: Direction.SE,
    Direction.SE: Direction.NW,
}

_GRID_OFFSETS = {
    Direction.N: (-1, 0),
    Direction.S: (1, 0),
    Direction.E: (0, 1),
    Direction.W: (0, -1),
    Direction.NE: (-1, 1),
    Direction.NW: (-1, -1),
    Direction.SE: (1, 1),
    Direction.SW: (1, -1),
}


# Counterclockwise from East, 45 degrees apart, in y-up math convention.
SECTOR_ORDER: tuple[Direction, ...] = (
    Direction.E,
    Direction.NE,
    Direction.N,
    Direction.NW,
    Direction.W,
    Direction.SW,
    Direction.S,
    Direction.SE,
)


def opposite(d: Direction) -> Direction:
    """Geometric antipode of a direction."""
    return d.opposite
