"""Detector nuisance model: misses, box jitter, look-alike confusion and false alarms."""

import math

import numpy as np
import structlog
from scipy.stats import truncnorm

from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.params import NoiseParams
from planogram_compliance.models.planogram import Detection, ReferencePlanogram
from planogram_compliance.models.scene import GroundTruthScene
from planogram_compliance.simulation.planogram import DEFAULT_CATEGORY_SIZE
from planogram_compliance.simulation.rng import make_rng

logger = structlog.get_logger()

JITTER_TRUNCATION = 3.0


def categories(planogram: ReferencePlanogram, category_size: int = DEFAULT_CATEGORY_SIZE) -> dict[str, int]:
    """Category of every catalog product.

    Products without a declared category are grouped in blocks of
    ``category_size`` following catalog order.
    """
    result = {}
    for index, product in enumerate(planogram.catalog()):
        declared = planogram.products.get(product)
        category = declared.category if declared is not None else None
        result[product] = category if category is not None else index // category_size
    return result


def _jitter(box: BBox, sigma: float, rng: np.random.Generator) -> BBox:
    if sigma <= 0:
        return box
    dx, dy, dw, dh = truncnorm.rvs(
        -JITTER_TRUNCATION, JITTER_TRUNCATION, scale=sigma, size=4, random_state=rng
    )
    return BBox(x=box.x + dx, y=box.y + dy, w=max(1.0, box.w + dw), h=max(1.0, box.h + dh))


def corrupt(gt: GroundTruthScene, noise: NoiseParams) -> list[Detection]:
    """
    Turn a ground-truth scene into a plausible detector output.

    Each present item is dropped with probability ``miss_rate``; survivors
    get truncated-gaussian box jitter and, with probability
    ``confusion_rate``, the label of another product from the same category.
    ``Poisson(fp_rate * #items)`` spurious boxes of typical item size are
    added at uniform positions with uniform catalog labels. Detection ids
    are assigned after a shuffle so they carry no hint of truth.
    """
    rng = make_rng(noise.seed, "noise")
    catalog = gt.planogram.catalog()
    category_of = categories(gt.planogram)
    siblings = {
        product: [p for p in catalog if p != product and category_of[p] == category_of[product]]
        for product in catalog
    }

    kept: list[tuple[str, BBox]] = []
    missed = confused = 0
    for item in gt.items:
        if rng.random() < noise.miss_rate:
            missed += 1
            continue
        box = _jitter(item.bbox, noise.jitter_sigma, rng)
        label = item.product
        if rng.random() < noise.confusion_rate and siblings.get(label):
            label = siblings[label][int(rng.integers(len(siblings[label])))]
            confused += 1
        kept.append((label, box))

    spurious = int(rng.poisson(noise.fp_rate * len(gt.items))) if gt.items else 0
    if spurious:
        w = math.fsum(item.bbox.w for item in gt.items) / len(gt.items)
        h = math.fsum(item.bbox.h for item in gt.items) / len(gt.items)
        for _ in range(spurious):
            x = rng.uniform(0.0, max(0.0, gt.width - w))
            y = rng.uniform(0.0, max(0.0, gt.height - h))
            label = catalog[int(rng.integers(len(catalog)))]
            kept.append((label, BBox(x=float(x), y=float(y), w=w, h=h)))

    order = rng.permutation(len(kept)) if kept else np.empty(0, dtype=int)
    detections = [
        Detection(det_id=f"d{rank:03d}", product=kept[index][0], bbox=kept[index][1])
        for rank, index in enumerate(order)
    ]
    logger.debug(
        "detections_corrupted",
        items=len(gt.items),
        missed=missed,
        confused=confused,
        spurious=spurious,
        detections=len(detections),
    )
    return sorted(detections, key=lambda d: d.det_id)
