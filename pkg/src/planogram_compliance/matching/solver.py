"""Heuristic sub-graph isomorphism between a reference and an observed planogram.

The search casts matching as constraint satisfaction: hypotheses pair nodes of
the same product, a greedy pass accepts the best-scored hypothesis, removes its
competitors and boosts hypotheses on coherent neighbours, and an outer loop
re-seeds the greedy pass from every hypothesis in turn while a
branch-and-bound test discards seeds that cannot beat the best confidence.
"""

import heapq
from collections import Counter
from collections.abc import Sequence

import structlog

from planogram_compliance.errors import EmptyHypothesisSetError
from planogram_compliance.matching.confidence import ObservedLayout, pairs_confidence
from planogram_compliance.matching.hypotheses import HypothesisSet, create_hypotheses
from planogram_compliance.models.matching import Assignment, Hypothesis, MatchResult, Solution
from planogram_compliance.models.params import SolverParams
from planogram_compliance.models.planogram import GridExtent, ObservedPlanogram, ReferencePlanogram

logger = structlog.get_logger()


def bound(partial_size: int, remaining: HypothesisSet) -> int:
    """
    Admissible upper bound B_C on the confidence reachable from a partial solution.

    Any completion adds at most one hypothesis per distinct reference node and
    per distinct observed node left in ``remaining``, and confidence never
    exceeds cardinality.
    """
    return partial_size + remaining.extension_bound()


def find_solution(
    hypotheses: HypothesisSet,
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    c_max: float,
    params: SolverParams | None = None,
    layout: ObservedLayout | None = None,
) -> tuple[float, Solution, Hypothesis]:
    """
    Greedily grow one self-consistent solution.

    Picks the highest-scored hypothesis (ties: lexicographic (ref, obs)),
    removes every hypothesis sharing either node, and adds ``1 / nn_t(r')`` to
    each hypothesis (r', o') sitting in the same direction from both accepted
    nodes. Stops when no hypothesis reaches ``tau`` or, with pruning enabled,
    as soon as the bound B_C cannot beat ``c_max``. The input set is left
    untouched.

    Returns:
        Tuple of (confidence, solution, seed hypothesis h0). h0 is the first
        hypothesis picked, i.e. the top of ``hypotheses``.

    Raises:
        EmptyHypothesisSetError: If ``hypotheses`` is empty
    """
    if not hypotheses:
        raise EmptyHypothesisSetError()
    params = params or SolverParams()
    layout = layout or ObservedLayout.of(observed)

    scores = hypotheses.scores()
    ref_live = Counter(ref for ref, _ in scores)
    obs_live = Counter(obs for _, obs in scores)
    heap = [(-score, ref, obs) for (ref, obs), score in scores.items()]
    heapq.heapify(heap)

    top_score, top_ref, top_obs = heap[0]
    seed = Hypothesis(ref_node=top_ref, obs_node=top_obs, score=-top_score)

    def drop(key: tuple[str, str]) -> None:
        if scores.pop(key, None) is None:
            return
        ref, obs = key
        ref_live[ref] -= 1
        if not ref_live[ref]:
            del ref_live[ref]
        obs_live[obs] -= 1
        if not obs_live[obs]:
            del obs_live[obs]

    accepted: list[Assignment] = []
    pruned = params.prune and min(len(ref_live), len(obs_live)) <= c_max

    while heap and not pruned:
        neg_score, ref, obs = heapq.heappop(heap)
        if scores.get((ref, obs)) != -neg_score:
            continue  # stale entry
        score = -neg_score
        if score < params.tau:
            break

        accepted.append(Assignment(ref_node=ref, obs_node=obs, score=score))
        for other_obs in hypotheses.for_ref(ref):
            drop(other_obs.key)
        for other_ref in hypotheses.for_obs(obs):
            drop(other_ref.key)

        obs_neighbors = observed.neighbors(obs)
        for direction, ref_neighbor in reference.neighbors(ref).items():
            obs_neighbor = obs_neighbors.get(direction)
            key = (ref_neighbor, obs_neighbor) if obs_neighbor is not None else None
            if key is None or key not in scores:
                continue
            scores[key] += 1.0 / reference.degree(ref_neighbor)
            heapq.heappush(heap, (-scores[key], ref_neighbor, obs_neighbor))

        if params.prune and len(accepted) + min(len(ref_live), len(obs_live)) <= c_max:
            pruned = True

    pairs = sorted((a.ref_node, a.obs_node) for a in accepted)
    c = pairs_confidence(pairs, reference, observed, params, layout)
    solution = Solution(
        assignments=tuple(sorted(accepted, key=lambda a: (a.ref_node, a.obs_node))),
        confidence=c,
        seed_hypothesis=seed,
    )
    logger.debug(
        "find_solution_finished",
        seed=seed.key,
        size=len(accepted),
        confidence=c,
        pruned=pruned,
    )
    return c, solution, seed


def _localization(reference: ReferencePlanogram, solution: Solution) -> GridExtent | None:
    return GridExtent.covering(reference.node(a.ref_node).grid_pos for a in solution.assignments)


def _result(reference: ReferencePlanogram, solution: Solution) -> MatchResult:
    matched = {a.ref_node for a in solution.assignments}
    return MatchResult(
        solution=solution,
        consistent_obs_nodes=frozenset(a.obs_node for a in solution.assignments),
        missing_ref_nodes=frozenset(set(reference.node_ids) - matched),
        localization=_localization(reference, solution),
    )


def solve(
    reference: ReferencePlanogram,
    observed: ObservedPlanogram,
    params: SolverParams | None = None,
) -> MatchResult:
    """
    Find the best self-consistent subset of the observed planogram.

    Runs :func:`find_solution` once per seed hypothesis, keeping the solution
    with the highest confidence (strict improvement, so earlier seeds win
    ties) and removing each returned seed from the pool. Two shortcuts end
    the loop early without changing the outcome: the next seed scores below
    ``tau`` (every later run would accept nothing), or, with pruning, the
    bound of the whole pool cannot beat the best confidence.
    """
    params = params or SolverParams()
    hypotheses = create_hypotheses(reference, observed)
    if not hypotheses:
        logger.info("solve_no_hypotheses", planogram=reference.name, observed=len(observed))
        return _result(reference, Solution())

    layout = ObservedLayout.of(observed)
    pool = hypotheses.copy()
    best = Solution()
    c_max = 0.0
    runs = 0

    for candidate in hypotheses.ranked():
        if candidate.score < params.tau:
            break
        if params.prune and bound(0, pool) <= c_max:
            break
        c, solution, seed = find_solution(pool, reference, observed, c_max, params, layout)
        runs += 1
        if c > c_max:
            best, c_max = solution, c
        pool.remove(seed.key)

    logger.info(
        "solve_completed",
        planogram=reference.name,
        hypotheses=len(hypotheses),
        runs=runs,
        matched=len(best),
        confidence=c_max,
    )
    return _result(reference, best)


def solve_multi(
    references: Sequence[ReferencePlanogram],
    observed: ObservedPlanogram,
    params: SolverParams | None = None,
) -> tuple[int, MatchResult]:
    """
    Localise the observed scene among several planograms.

    Returns the index of the planogram with the highest confidence (lowest
    index on ties) together with its match result.
    """
    if not references:
        raise ValueError("at least one reference planogram is required")
    results = [solve(reference, observed, params) for reference in references]
    best_index = max(range(len(results)), key=lambda i: (results[i].confidence, -i))
    logger.info(
        "solve_multi_completed",
        candidates=len(references),
        best_index=best_index,
        confidence=results[best_index].confidence,
    )
    return best_index, results[best_index]
