"""Pytest configuration and fixtures."""

import os
from collections.abc import Callable, Sequence

import pytest
import structlog

from planogram_compliance.config import Settings
from planogram_compliance.graph.topology import grid_edges
from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.params import NoiseParams
from planogram_compliance.models.planogram import Detection, ReferenceNode, ReferencePlanogram
from planogram_compliance.models.scene import GroundTruthScene
from planogram_compliance.simulation.noise import corrupt
from planogram_compliance.simulation.planogram import gen_planogram
from planogram_compliance.simulation.scene import gen_scene

# Keep stray environment configuration out of the tests.
for _name in list(os.environ):
    if _name.startswith("PLANOGRAM_"):
        del os.environ[_name]

structlog.configure(
    processors=[structlog.processors.JSONRenderer()],
    wrapper_class=structlog.make_filtering_bound_logger(30),
)

Layout = Sequence[Sequence[str | None]]

CELL = 40.0
ITEM = 36.0


def _reference(layout: Layout, name: str = "planogram") -> ReferencePlanogram:
    nodes = [
        ReferenceNode(node_id=f"r{row}{col}", product=product, row=row, col=col)
        for row, line in enumerate(layout)
        for col, product in enumerate(line)
        if product is not None
    ]
    return ReferencePlanogram(name=name, nodes=tuple(nodes), edges=grid_edges(nodes))


def _detections(
    layout: Layout,
    prefix: str = "o",
    cell: float = CELL,
    size: float = ITEM,
    dx: float = 0.0,
) -> list[Detection]:
    return [
        Detection(
            det_id=f"{prefix}{row}{col}",
            product=product,
            bbox=BBox(x=dx + col * cell, y=row * cell, w=size, h=size),
        )
        for row, line in enumerate(layout)
        for col, product in enumerate(line)
        if product is not None
    ]


@pytest.fixture
def settings() -> Settings:
    """Default settings, isolated from the environment."""
    return Settings(_env_file=None)


@pytest.fixture
def make_reference() -> Callable[..., ReferencePlanogram]:
    """Factory: reference planogram from rows of product labels (``None`` leaves a hole)."""
    return _reference


@pytest.fixture
def make_detections() -> Callable[..., list[Detection]]:
    """Factory: one 36x36 detection per label on a 40 px grid, ids ``o<row><col>``."""
    return _detections


@pytest.fixture
def square_layout() -> list[list[str]]:
    """2x2 layout A B / C D."""
    return [["A", "B"], ["C", "D"]]


@pytest.fixture
def square_reference(square_layout) -> ReferencePlanogram:
    return _reference(square_layout)


@pytest.fixture
def clean_scene() -> tuple[GroundTruthScene, list[Detection]]:
    """Noise-free 2x4 simulated scene and its detections."""
    planogram = gen_planogram(2, 4, 24, seed=11, name="clean")
    gt = gen_scene(planogram, CELL, CELL, seed=11)
    return gt, corrupt(gt, NoiseParams())
