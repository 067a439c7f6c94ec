"""Procedural grayscale rendering of ground-truth scenes."""

import math

import numpy as np
from scipy import ndimage

from planogram_compliance.errors import CanvasOverflowError
from planogram_compliance.models.scene import GroundTruthScene
from planogram_compliance.simulation.rng import make_rng

BACKGROUND = 128
TEXTURE_CELL = 8


def product_texture(product: str, width: int, height: int, cell: int = TEXTURE_CELL) -> np.ndarray:
    """
    Value-noise texture seeded by the product id.

    A coarse lattice of random gray levels, one every ``cell`` pixels, is
    bilinearly upsampled to ``height`` x ``width``. The same product always
    yields the same texture for a given size.
    """
    if width < 1 or height < 1:
        raise ValueError(f"texture size must be positive: {width}x{height}")
    rng = make_rng(0, "texture", product)
    rows = max(2, math.ceil(height / cell) + 1)
    cols = max(2, math.ceil(width / cell) + 1)
    lattice = rng.uniform(16.0, 240.0, size=(rows, cols))
    texture = ndimage.zoom(lattice, (height / rows, width / cols), order=1)
    return np.clip(np.rint(texture[:height, :width]), 0, 255).astype(np.uint8)


def render_scene(
    gt: GroundTruthScene,
    width: int | None = None,
    height: int | None = None,
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """
    Paint every present item onto a mid-gray canvas.

    Returns:
        Tuple of (image, templates), both uint8; templates holds the pristine
        texture of each rendered product at its item size

    Raises:
        CanvasOverflowError: If an item does not fit inside the canvas
    """
    width = width or gt.width
    height = height or gt.height
    image = np.full((height, width), BACKGROUND, dtype=np.uint8)
    templates: dict[str, np.ndarray] = {}

    for item in gt.items:
        x0, y0 = round(item.bbox.x), round(item.bbox.y)
        w, h = max(1, round(item.bbox.w)), max(1, round(item.bbox.h))
        if x0 < 0 or y0 < 0 or x0 + w > width or y0 + h > height:
            raise CanvasOverflowError(
                f"item {item.node_id} at ({x0}, {y0}, {w}, {h}) exceeds {width}x{height} canvas"
            )
        texture = product_texture(item.product, w, h)
        image[y0 : y0 + h, x0 : x0 + w] = texture
        templates.setdefault(item.product, texture)

    return image, templates
