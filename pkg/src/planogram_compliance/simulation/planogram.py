"""Random reference planograms."""

import structlog

from planogram_compliance.graph.topology import grid_edges
from planogram_compliance.models.planogram import Product, ReferenceNode, ReferencePlanogram
from planogram_compliance.simulation.rng import make_rng

logger = structlog.get_logger()

DEFAULT_CATEGORY_SIZE = 4


def product_id(index: int) -> str:
    return f"p{index:03d}"


def node_id(row: int, col: int) -> str:
    return f"n{row:03d}_{col:03d}"


def make_catalog(n_products: int, category_size: int = DEFAULT_CATEGORY_SIZE) -> dict[str, Product]:
    """Products ``p000``, ``p001``, ...; consecutive blocks of ``category_size`` share a category."""
    if n_products < 1:
        raise ValueError("n_products must be positive")
    if category_size < 1:
        raise ValueError("category_size must be positive")
    return {
        product_id(i): Product(id=product_id(i), category=i // category_size)
        for i in range(n_products)
    }


def gen_planogram(
    rows: int,
    cols: int,
    n_products: int,
    seed: int,
    name: str = "planogram",
    category_size: int = DEFAULT_CATEGORY_SIZE,
) -> ReferencePlanogram:
    """
    A full ``rows`` x ``cols`` grid with 8-neighbourhood edges.

    Each shelf row is filled left to right with runs of one or two facings
    of a uniformly drawn catalog product, so products repeat.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"planogram dimensions must be positive: {rows}x{cols}")
    catalog = make_catalog(n_products, category_size)
    rng = make_rng(seed, "planogram", name)

    nodes: list[ReferenceNode] = []
    for row in range(rows):
        col = 0
        while col < cols:
            product = product_id(int(rng.integers(n_products)))
            run = int(rng.integers(1, 3))
            for c in range(col, min(cols, col + run)):
                nodes.append(ReferenceNode(node_id=node_id(row, c), product=product, row=row, col=c))
            col += run

    planogram = ReferencePlanogram(
        name=name,
        products=catalog,
        nodes=tuple(nodes),
        edges=grid_edges(nodes),
    )
    logger.debug("planogram_generated", name=name, rows=rows, cols=cols, products=n_products)
    return planogram
