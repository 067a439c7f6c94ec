"""Hypothesis generation and the indexed hypothesis set."""

from collections import defaultdict
from collections.abc import Iterable, Iterator

import structlog

from planogram_compliance.models.matching import Hypothesis
from planogram_compliance.models.planogram import ObservedPlanogram, ReferencePlanogram

logger = structlog.get_logger()

Key = tuple[str, str]


class HypothesisSet:
    """
    Hypotheses indexed by reference node and by observed node.

    At most one hypothesis exists per (ref_node, obs_node) pair. The number of
    distinct reference and observed nodes still covered is tracked
    incrementally so the search bound stays O(1).
    """

    def __init__(self, hypotheses: Iterable[Hypothesis] = ()):
        self._scores: dict[Key, float] = {}
        self._by_ref: dict[str, set[str]] = defaultdict(set)
        self._by_obs: dict[str, set[str]] = defaultdict(set)
        for hypothesis in hypotheses:
            self.add(hypothesis)

    def add(self, hypothesis: Hypothesis) -> None:
        key = hypothesis.key
        if key in self._scores:
            raise ValueError(f"duplicate hypothesis: {key}")
        self._scores[key] = hypothesis.score
        self._by_ref[hypothesis.ref_node].add(hypothesis.obs_node)
        self._by_obs[hypothesis.obs_node].add(hypothesis.ref_node)

    def remove(self, key: Key) -> None:
        """Drop one hypothesis; unknown keys are ignored."""
        if self._scores.pop(key, None) is None:
            return
        ref, obs = key
        self._by_ref[ref].discard(obs)
        if not self._by_ref[ref]:
            del self._by_ref[ref]
        self._by_obs[obs].discard(ref)
        if not self._by_obs[obs]:
            del self._by_obs[obs]

    def copy(self) -> "HypothesisSet":
        clone = HypothesisSet()
        clone._scores = dict(self._scores)
        clone._by_ref = defaultdict(set, {r: set(o) for r, o in self._by_ref.items()})
        clone._by_obs = defaultdict(set, {o: set(r) for o, r in self._by_obs.items()})
        return clone

    def __len__(self) -> int:
        return len(self._scores)

    def __bool__(self) -> bool:
        return bool(self._scores)

    def __contains__(self, key: object) -> bool:
        return key in self._scores

    def __iter__(self) -> Iterator[Hypothesis]:
        for (ref, obs), score in sorted(self._scores.items()):
            yield Hypothesis(ref_node=ref, obs_node=obs, score=score)

    def score(self, ref: str, obs: str) -> float | None:
        return self._scores.get((ref, obs))

    def scores(self) -> dict[Key, float]:
        """A copy of the raw score table."""
        return dict(self._scores)

    def for_ref(self, ref: str) -> list[Hypothesis]:
        return [
            Hypothesis(ref_node=ref, obs_node=obs, score=self._scores[(ref, obs)])
            for obs in sorted(self._by_ref.get(ref, ()))
        ]

    def for_obs(self, obs: str) -> list[Hypothesis]:
        return [
            Hypothesis(ref_node=ref, obs_node=obs, score=self._scores[(ref, obs)])
            for ref in sorted(self._by_obs.get(obs, ()))
        ]

    @property
    def ref_nodes(self) -> set[str]:
        return set(self._by_ref)

    @property
    def obs_nodes(self) -> set[str]:
        return set(self._by_obs)

    def ranked(self) -> list[Hypothesis]:
        """Highest score first; ties in lexicographic (ref_node, obs_node) order."""
        ordered = sorted(self._scores.items(), key=lambda item: (-item[1], item[0]))
        return [Hypothesis(ref_node=r, obs_node=o, score=s) for (r, o), s in ordered]

    def best(self) -> Hypothesis | None:
        if not self._scores:
            return None
        (ref, obs), score = min(self._scores.items(), key=lambda item: (-item[1], item[0]))
        return Hypothesis(ref_node=ref, obs_node=obs, score=score)

    def extension_bound(self) -> int:
        """Largest number of mutually compatible hypotheses this set could still add."""
        return min(len(self._by_ref), len(self._by_obs))


def coherence_score(
    ref_node: str,
    obs_node: str,
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
) -> float:
    """Fraction of the reference node's neighbours mirrored by the observed node.

    A direction is coherent when both nodes have a neighbour there and the two
    neighbours carry the same product. Isolated reference nodes score 0.
    """
    ref_neighbors = reference.neighbors(ref_node)
    if not ref_neighbors:
        return 0.0
    obs_neighbors = observed.neighbors(obs_node)
    coherent = sum(
        1
        for direction, ref_neighbor in ref_neighbors.items()
        if direction in obs_neighbors
        and reference.product_of(ref_neighbor) == observed.product_of(obs_neighbors[direction])
    )
    return coherent / len(ref_neighbors)


def create_hypotheses(reference: ReferencePlanogram, observed: ObservedPlanogram) -> HypothesisSet:
    """One hypothesis per product-matching (reference, observed) node pair."""
    by_product: dict[str, list[str]] = defaultdict(list)
    for obs_id in observed.node_ids:
        by_product[observed.product_of(obs_id)].append(obs_id)

    hypotheses = HypothesisSet()
    for ref_id in reference.node_ids:
        for obs_id in by_product.get(reference.product_of(ref_id), ()):
            hypotheses.add(
                Hypothesis(
                    ref_node=ref_id,
                    obs_node=obs_id,
                    score=coherence_score(ref_id, obs_id, reference, observed),
                )
            )

    logger.debug(
        "hypotheses_created",
        count=len(hypotheses),
        ref_nodes=len(hypotheses.ref_nodes),
        obs_nodes=len(hypotheses.obs_nodes),
    )
    return hypotheses
