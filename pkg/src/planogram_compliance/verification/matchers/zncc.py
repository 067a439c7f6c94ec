"""Template matching by zero-mean normalised cross-correlation."""

import math
from collections.abc import Sequence

import numpy as np
import structlog
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.verification import Proposal
from planogram_compliance.verification.context import SceneContext
from planogram_compliance.verification.matchers.base import Matcher

logger = structlog.get_logger()

DEFAULT_SCALES = (0.8, 1.0, 1.25)

# Windows or templates flatter than this score 0.
_MIN_STD = 1e-9


def default_stride(template_w: int, template_h: int) -> int:
    return max(1, round(min(template_w, template_h) / 8))


def rescale_template(template: np.ndarray, scale: float) -> np.ndarray:
    """Nearest-neighbour rescale."""
    if scale == 1.0:
        return template
    return ndimage.zoom(template, scale, order=0)


def zncc_score(template: np.ndarray, window: np.ndarray) -> float:
    """max(0, ZNCC) of two equally sized grids; 0 when either is constant."""
    t = np.asarray(template, dtype=np.float64)
    w = np.asarray(window, dtype=np.float64)
    if t.shape != w.shape:
        raise ValueError(f"shape mismatch: {t.shape} vs {w.shape}")
    return float(_zncc_map(t, w[np.newaxis, np.newaxis])[0, 0])


def _zncc_map(template: np.ndarray, windows: np.ndarray) -> np.ndarray:
    """Scores for a (rows, cols, th, tw) stack of windows."""
    t0 = template - template.mean()
    t_std = template.std()
    if t_std < _MIN_STD:
        return np.zeros(windows.shape[:2])
    w_mean = windows.mean(axis=(-2, -1), keepdims=True)
    w_std = windows.std(axis=(-2, -1))
    numerator = ((windows - w_mean) * t0).sum(axis=(-2, -1))
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = numerator / (template.size * t_std * w_std)
    scores[w_std < _MIN_STD] = 0.0
    return np.clip(scores, 0.0, 1.0)


def _placements(lo: float, hi: float, size: int, limit: int, stride: int) -> np.ndarray:
    """Top-left offsets whose window centre lies in [lo, hi] and that fit in [0, limit)."""
    start = max(0, math.ceil(lo - size / 2))
    stop = min(limit - size, math.floor(hi - size / 2))
    if stop < start:
        return np.empty(0, dtype=np.intp)
    return np.arange(start, stop + 1, stride, dtype=np.intp)


def _strict_local_maxima(scores: np.ndarray) -> np.ndarray:
    footprint = np.ones((3, 3), dtype=bool)
    footprint[1, 1] = False
    neighbourhood = ndimage.maximum_filter(scores, footprint=footprint, mode="constant", cval=-np.inf)
    return (scores > neighbourhood) & (scores > 0)


def zncc_match(
    template: np.ndarray,
    scene: np.ndarray,
    roi: BBox,
    scales: Sequence[float] = DEFAULT_SCALES,
    stride: int | None = None,
) -> list[Proposal]:
    """
    Slide ``template`` over ``roi`` at several scales.

    A placement is a window fully inside ``scene`` whose centre falls in
    ``roi``. Placements are sampled every ``stride`` pixels (by default
    ``max(1, round(min(tw, th) / 8))`` of the rescaled template). Each
    strict local maximum of a scale's score map with a positive score
    becomes a proposal.

    Returns:
        Proposals ordered by descending raw score, then position
    """
    image = np.asarray(scene, dtype=np.float64)
    if image.ndim != 2:
        raise ValueError("scene must be a single-channel grid")
    height, width = image.shape
    base = np.asarray(template, dtype=np.float64)

    found: list[Proposal] = []
    for scale in scales:
        scaled = rescale_template(base, scale)
        th, tw = scaled.shape
        if th == 0 or tw == 0 or th > height or tw > width:
            continue
        step = stride or default_stride(tw, th)
        xs = _placements(roi.x, roi.x2, tw, width, step)
        ys = _placements(roi.y, roi.y2, th, height, step)
        if xs.size == 0 or ys.size == 0:
            continue

        windows = sliding_window_view(image, (th, tw))[ys[:, np.newaxis], xs[np.newaxis, :]]
        scores = _zncc_map(scaled, windows)
        for i, j in np.argwhere(_strict_local_maxima(scores)):
            found.append(
                Proposal(
                    bbox=BBox(x=float(xs[j]), y=float(ys[i]), w=float(tw), h=float(th)),
                    raw_score=float(scores[i, j]),
                )
            )

    found.sort(key=lambda p: (-p.raw_score, p.bbox.y, p.bbox.x, p.bbox.w))
    return found


class ZnccMatcher(Matcher):
    """Template matcher over a grayscale shelf image and per-product templates."""

    name = "zncc"
    max_raw_score = 1.0

    def __init__(self, scales: Sequence[float] = DEFAULT_SCALES, stride: int | None = None):
        self.scales = tuple(scales)
        self.stride = stride

    def can_handle(self, scene: SceneContext) -> bool:
        return scene.image is not None

    def find_proposals(self, scene: SceneContext, product: str, roi: BBox) -> list[Proposal]:
        template = scene.templates.get(product)
        if scene.image is None or template is None:
            logger.warning("template_missing", product=product)
            return []
        return zncc_match(template, scene.image, roi, self.scales, self.stride)
