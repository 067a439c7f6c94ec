"""Deterministic simulator of planograms, shelf scenes and noisy detections."""

from planogram_compliance.simulation.dataset import (
    BENCHMARK_NOISE,
    DatasetSpec,
    SimulatedScene,
    simulate_dataset,
    simulate_scene,
)
from planogram_compliance.simulation.noise import corrupt
from planogram_compliance.simulation.planogram import gen_planogram, make_catalog
from planogram_compliance.simulation.render import product_texture, render_scene
from planogram_compliance.simulation.rng import derive_seed, make_rng
from planogram_compliance.simulation.scene import gen_scene

__all__ = [
    "BENCHMARK_NOISE",
    "DatasetSpec",
    "SimulatedScene",
    "corrupt",
    "derive_seed",
    "gen_planogram",
    "gen_scene",
    "make_catalog",
    "make_rng",
    "product_texture",
    "render_scene",
    "simulate_dataset",
    "simulate_scene",
]
