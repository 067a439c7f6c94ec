"""Seeded batches of simulated scenes."""

import structlog
from pydantic import BaseModel, ConfigDict, Field

from planogram_compliance.models.params import NoiseParams
from planogram_compliance.models.planogram import Detection, GridExtent, ReferencePlanogram
from planogram_compliance.models.scene import GroundTruthScene
from planogram_compliance.simulation.noise import corrupt
from planogram_compliance.simulation.planogram import gen_planogram
from planogram_compliance.simulation.rng import derive_seed
from planogram_compliance.simulation.scene import gen_scene

logger = structlog.get_logger()

# Detector noise that puts raw detection precision around 75-80% on 2x6 scenes.
BENCHMARK_NOISE = NoiseParams(miss_rate=0.1, fp_rate=0.15, confusion_rate=0.1, jitter_sigma=1.5)


class SimulatedScene(BaseModel):
    """One ground-truth scene together with its corrupted detections."""

    model_config = ConfigDict(frozen=True)

    index: int = 0
    ground_truth: GroundTruthScene
    detections: tuple[Detection, ...]

    @property
    def planogram(self) -> ReferencePlanogram:
        return self.ground_truth.planogram


class DatasetSpec(BaseModel):
    """Shape of a simulated benchmark."""

    model_config = ConfigDict(frozen=True)

    scenes: int = Field(default=70, ge=1)
    rows: int = Field(default=2, ge=1)
    cols: int = Field(default=6, ge=1)
    n_products: int = Field(default=24, ge=1)
    cell_w: float = Field(default=40.0, gt=0)
    cell_h: float = Field(default=40.0, gt=0)
    void_rate: float = Field(default=0.0, ge=0, le=1)
    seed: int = Field(default=0, ge=0)


def simulate_scene(
    planogram: ReferencePlanogram,
    noise: NoiseParams,
    cell_w: float = 40.0,
    cell_h: float = 40.0,
    void_rate: float = 0.0,
    seed: int = 0,
    view: GridExtent | None = None,
    index: int = 0,
) -> SimulatedScene:
    gt = gen_scene(planogram, cell_w, cell_h, void_rate=void_rate, seed=seed, view=view)
    return SimulatedScene(index=index, ground_truth=gt, detections=tuple(corrupt(gt, noise)))


def simulate_dataset(spec: DatasetSpec, noise: NoiseParams) -> list[SimulatedScene]:
    """
    ``spec.scenes`` independent scenes, each with its own planogram.

    Scene ``i`` draws planogram, voids and noise from child streams of
    ``(spec.seed, i)`` and of ``noise.seed``, so any single scene can be
    regenerated without the others.
    """
    scenes = []
    for index in range(spec.scenes):
        planogram = gen_planogram(
            spec.rows,
            spec.cols,
            spec.n_products,
            seed=derive_seed(spec.seed, "planogram", index),
            name=f"aisle-{index:03d}",
        )
        scene_noise = noise.model_copy(update={"seed": derive_seed(noise.seed, "noise", spec.seed, index)})
        scenes.append(
            simulate_scene(
                planogram,
                scene_noise,
                cell_w=spec.cell_w,
                cell_h=spec.cell_h,
                void_rate=spec.void_rate,
                seed=derive_seed(spec.seed, "scene", index),
                index=index,
            )
        )
    logger.info("dataset_simulated", scenes=len(scenes), seed=spec.seed, noise_seed=noise.seed)
    return scenes
