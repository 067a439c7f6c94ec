"""Exhaustive solver used as ground truth for the heuristic matcher."""

from collections import Counter
from collections.abc import Sequence

import structlog
from pydantic import BaseModel

from planogram_compliance.errors import InstanceTooLargeError
from planogram_compliance.matching.confidence import ObservedLayout, pairs_confidence
from planogram_compliance.matching.hypotheses import create_hypotheses
from planogram_compliance.models.matching import Assignment, Solution
from planogram_compliance.models.params import SolverParams
from planogram_compliance.models.planogram import ObservedPlanogram, ReferencePlanogram

logger = structlog.get_logger()

DEFAULT_NODE_LIMIT = 12


class OracleStats(BaseModel):
    """Counters from one exhaustive search."""

    leaves: int = 0
    pruned: int = 0


def brute_force_search(
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    params: SolverParams | None = None,
    node_limit: int = DEFAULT_NODE_LIMIT,
    prune: bool = False,
    fixed: Sequence[tuple[str, str]] = (),
) -> tuple[Solution, OracleStats]:
    """
    Enumerate every injective, product-consistent assignment set.

    Reference nodes are visited in lexicographic order; each one tries its
    free same-product observed nodes in lexicographic order and "unassigned"
    last. The first assignment set reaching a strictly better
    (confidence, size) is kept, so ties resolve to the lexicographically
    smallest assignment list. Only product labels restrict the enumeration
    by default. With ``prune`` a branch is also cut when
    ``|S| + min(remaining refs with a free candidate, free candidate obs)``
    cannot beat the best confidence found so far.

    ``fixed`` pairs are forced into every assignment set, so the result is
    the best completion of that partial solution.

    Raises:
        InstanceTooLargeError: If ``min(|I|, |O|)`` exceeds ``node_limit``
        ValueError: If ``fixed`` is not a product-consistent injective partial solution
    """
    size = min(len(reference), len(observed))
    if size > node_limit:
        raise InstanceTooLargeError(size, node_limit)
    params = params or SolverParams()
    layout = ObservedLayout.of(observed)

    hypotheses = create_hypotheses(reference, observed)
    refs = reference.node_ids
    options = {ref: [h.obs_node for h in hypotheses.for_ref(ref)] for ref in refs}
    scores = hypotheses.scores()
    forced = dict(fixed)
    if len(forced) != len(fixed) or len(set(forced.values())) != len(forced):
        raise ValueError("fixed pairs must be injective")
    for ref, obs in forced.items():
        if (ref, obs) not in scores:
            raise ValueError(f"fixed pair is not product-consistent: {(ref, obs)}")
        options[ref] = [obs]

    stats = OracleStats()
    best_pairs: list[tuple[str, str]] = []
    best_key = (0.0, 0)
    used: set[str] = set()
    forced_obs = set(forced.values())
    pairs: list[tuple[str, str]] = []

    def upper_bound(index: int) -> int:
        remaining = refs[index:]
        free = Counter(
            obs for ref in remaining for obs in options[ref] if obs not in used
        )
        live_refs = sum(1 for ref in remaining if any(o not in used for o in options[ref]))
        return len(pairs) + min(live_refs, len(free))

    def visit(index: int) -> None:
        nonlocal best_pairs, best_key
        if index == len(refs):
            stats.leaves += 1
            key = (pairs_confidence(pairs, reference, observed, params, layout), len(pairs))
            if key > best_key:
                best_key, best_pairs = key, list(pairs)
            return
        if prune and upper_bound(index) <= best_key[0]:
            stats.pruned += 1
            return
        ref = refs[index]
        for obs in options[ref]:
            if obs in used or (obs in forced_obs and forced.get(ref) != obs):
                continue
            used.add(obs)
            pairs.append((ref, obs))
            visit(index + 1)
            pairs.pop()
            used.discard(obs)
        if ref not in forced:
            visit(index + 1)

    visit(0)

    solution = Solution(
        assignments=tuple(
            Assignment(ref_node=ref, obs_node=obs, score=scores[(ref, obs)])
            for ref, obs in best_pairs
        ),
        confidence=best_key[0],
    )
    logger.debug(
        "oracle_search_finished",
        leaves=stats.leaves,
        pruned=stats.pruned,
        matched=len(solution),
        confidence=solution.confidence,
    )
    return solution, stats


def brute_force_solve(
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    params: SolverParams | None = None,
    node_limit: int = DEFAULT_NODE_LIMIT,
    prune: bool = False,
) -> Solution:
    """Optimal solution under the same confidence as the heuristic solver."""
    solution, _ = brute_force_search(reference, observed, params, node_limit, prune=prune)
    return solution
