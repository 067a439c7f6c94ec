"""Heuristic solver against the exhaustive oracle on random small instances."""

from itertools import combinations

import pytest

from planogram_compliance.graph.builder import build_observed
from planogram_compliance.graph.topology import grid_edges
from planogram_compliance.matching.hypotheses import HypothesisSet, create_hypotheses
from planogram_compliance.matching.oracle import brute_force_search
from planogram_compliance.matching.solver import bound, find_solution, solve
from planogram_compliance.models.geometry import BBox
from planogram_compliance.models.matching import Solution
from planogram_compliance.models.params import SolverParams
from planogram_compliance.models.planogram import Detection, ObservedPlanogram, ReferenceNode, ReferencePlanogram
from planogram_compliance.simulation.rng import make_rng

INSTANCES = 1000
BOUND_INSTANCES = 60
ALPHABET = "ABCDEF"

Instance = tuple[ReferencePlanogram, ObservedPlanogram]


def random_instance(seed: int, foreign: bool = True) -> Instance:
    """
    A 2x3 or 2x4 planogram over 3-6 products and its photograph.

    Up to three detections are relabelled: with ``foreign`` to a product the
    plan does not carry, otherwise to another product of the plan, which
    creates competing hypotheses. Detection ids follow grid order so ties
    resolve alike on both sides.
    """
    rng = make_rng(seed, "oracle-instance")
    rows, cols = 2, int(rng.integers(3, 5))
    alphabet = ALPHABET[: int(rng.integers(3, 7))]
    layout = [[alphabet[int(rng.integers(len(alphabet)))] for _ in range(cols)] for _ in range(rows)]

    nodes = [
        ReferenceNode(node_id=f"r{r}{c}", product=layout[r][c], row=r, col=c)
        for r in range(rows)
        for c in range(cols)
    ]
    reference = ReferencePlanogram(name=f"instance-{seed}", nodes=tuple(nodes), edges=grid_edges(nodes))

    cells = [(r, c) for r in range(rows) for c in range(cols)]
    mislabelled = {cells[int(i)] for i in rng.choice(len(cells), size=int(rng.integers(0, 4)), replace=False)}
    labels = {cell: layout[cell[0]][cell[1]] for cell in cells}
    for cell in sorted(mislabelled):
        if foreign:
            labels[cell] = "Z"
        else:
            shift = 1 + int(rng.integers(len(alphabet) - 1))
            labels[cell] = alphabet[(alphabet.index(labels[cell]) + shift) % len(alphabet)]
    detections = [
        Detection(det_id=f"o{r}{c}", product=labels[(r, c)], bbox=BBox(x=c * 40.0, y=r * 40.0, w=36, h=36))
        for r, c in cells
    ]
    return reference, build_observed(detections)


def _oracle_table(instances: list[Instance]) -> list[Solution]:
    return [brute_force_search(reference, observed)[0] for reference, observed in instances]


def _hit_rate(instances: list[Instance], oracles: list[Solution], params: SolverParams) -> float:
    hits = 0
    for (reference, observed), oracle in zip(instances, oracles, strict=True):
        heuristic = solve(reference, observed, params)
        assert heuristic.confidence <= oracle.confidence + 1e-9, reference.name
        hits += len(heuristic.solution) == len(oracle)
    return hits / len(instances)


def _without_conflicts(hypotheses: HypothesisSet, partial: tuple[tuple[str, str], ...]) -> HypothesisSet:
    """Hypotheses still compatible with ``partial``: what the greedy pass has left."""
    refs = {ref for ref, _ in partial}
    obs = {o for _, o in partial}
    remaining = hypotheses.copy()
    for hypothesis in hypotheses:
        if hypothesis.ref_node in refs or hypothesis.obs_node in obs:
            remaining.remove(hypothesis.key)
    return remaining


@pytest.fixture(scope="module")
def instances() -> list[Instance]:
    return [random_instance(seed) for seed in range(INSTANCES)]


@pytest.fixture(scope="module")
def oracles(instances) -> list[Solution]:
    return _oracle_table(instances)


@pytest.fixture(scope="module")
def competing_instances() -> list[Instance]:
    return [random_instance(seed, foreign=False) for seed in range(INSTANCES)]


@pytest.fixture(scope="module")
def competing_oracles(competing_instances) -> list[Solution]:
    return _oracle_table(competing_instances)


@pytest.mark.slow
class TestOracleEquivalence:
    """Measured properties of the heuristic over a fixed set of seeds."""

    def test_heuristic_never_exceeds_the_oracle(self, instances, oracles):
        """Test C(heuristic) <= C(oracle) <= B_C on every instance, and the hit rate."""
        for (reference, observed), oracle in zip(instances, oracles, strict=True):
            assert oracle.confidence <= bound(0, create_hypotheses(reference, observed)), reference.name
        assert _hit_rate(instances, oracles, SolverParams()) >= 0.9

    def test_pruning_is_lossless(self, instances):
        """Test branch-and-bound on vs off: identical (C_max, S_best) with zero tolerance."""
        for reference, observed in instances:
            pruned = solve(reference, observed, SolverParams(prune=True))
            exhaustive = solve(reference, observed, SolverParams(prune=False))
            assert pruned.confidence == exhaustive.confidence, reference.name
            assert pruned.solution.pairs == exhaustive.solution.pairs, reference.name

    def test_oracle_pruning_is_lossless(self, instances, oracles):
        """Test that the oracle's own bound never changes its answer."""
        for (reference, observed), exact in zip(instances, oracles, strict=True):
            bounded, _ = brute_force_search(reference, observed, prune=True)
            assert bounded == exact, reference.name


@pytest.mark.slow
class TestCompetingLabels:
    """
    Mislabels drawn from the plan's own products.

    These compete with the true detections for the same reference nodes. The
    tau cutoff then rejects some weakly supported but correct hypotheses, so
    the hit rate is measured here on its own rather than folded into the
    foreign-label figure.
    """

    def test_heuristic_never_exceeds_the_oracle(self, competing_instances, competing_oracles):
        """Test C(heuristic) <= C(oracle) and the hit rate at the default tau."""
        assert _hit_rate(competing_instances, competing_oracles, SolverParams()) >= 0.70

    def test_hit_rate_without_cutoff(self, competing_instances, competing_oracles):
        """Test that with tau = 0 the heuristic reaches the oracle's cardinality almost always."""
        assert _hit_rate(competing_instances, competing_oracles, SolverParams(tau=0.0)) >= 0.95


@pytest.mark.slow
class TestBoundAdmissibility:
    """B_C against the best completion of every partial state of the greedy pass."""

    @pytest.mark.parametrize("foreign", [True, False], ids=["foreign-labels", "competing-labels"])
    def test_bound_covers_every_completion(self, foreign):
        """Test |S| + extension bound >= oracle optimum over completions of S, for every S along the pass."""
        for seed in range(BOUND_INSTANCES):
            reference, observed = random_instance(seed, foreign=foreign)
            hypotheses = create_hypotheses(reference, observed)
            if not hypotheses:
                continue
            _, solution, _ = find_solution(hypotheses, reference, observed, 0.0, SolverParams(prune=False))
            accepted = tuple(solution.pairs)
            # Every state of the pass is a subset of what it finally accepted.
            for size in range(len(accepted) + 1):
                for partial in combinations(accepted, size):
                    best, _ = brute_force_search(reference, observed, fixed=partial)
                    ceiling = bound(len(partial), _without_conflicts(hypotheses, partial))
                    assert best.confidence <= ceiling, (reference.name, partial)
