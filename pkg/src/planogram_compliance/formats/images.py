"""Portable graymap images and per-product template libraries."""

from pathlib import Path

import numpy as np
import structlog
from PIL import Image, UnidentifiedImageError

from planogram_compliance.errors import FormatError

logger = structlog.get_logger()

TEMPLATE_SUFFIX = ".pgm"


def read_pgm(path: Path) -> np.ndarray:
    """Read a plain (P2) or raw (P5) graymap as a 2-D uint8 array."""
    try:
        with Image.open(path) as image:
            return np.asarray(image.convert("L"), dtype=np.uint8).copy()
    except (OSError, UnidentifiedImageError) as e:
        raise FormatError(f"{path}: cannot read graymap: {e}") from e


def write_pgm(path: Path, image: np.ndarray) -> None:
    """Write a 2-D array as a raw (P5) graymap."""
    array = np.asarray(image)
    if array.ndim != 2:
        raise ValueError(f"graymap must be 2-D, got shape {array.shape}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.clip(array, 0, 255).astype(np.uint8)).save(path, format="PPM")


def load_templates(directory: Path) -> dict[str, np.ndarray]:
    """Templates named ``<product id>.pgm`` in ``directory``."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FormatError(f"{directory}: template directory not found")
    templates = {
        path.stem: read_pgm(path) for path in sorted(directory.glob(f"*{TEMPLATE_SUFFIX}"))
    }
    logger.debug("templates_loaded", directory=str(directory), count=len(templates))
    return templates


def save_templates(templates: dict[str, np.ndarray], directory: Path) -> None:
    for product, template in sorted(templates.items()):
        write_pgm(Path(directory) / f"{product}{TEMPLATE_SUFFIX}", template)
