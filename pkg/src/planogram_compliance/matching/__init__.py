"""Graph-based consistency check: hypotheses, heuristic solver and exhaustive oracle."""

from planogram_compliance.matching.confidence import (
    ObservedLayout,
    confidence,
    count_displaced_components,
)
from planogram_compliance.matching.hypotheses import (
    HypothesisSet,
    coherence_score,
    create_hypotheses,
)
from planogram_compliance.matching.oracle import OracleStats, brute_force_search, brute_force_solve
from planogram_compliance.matching.solver import bound, find_solution, solve, solve_multi

__all__ = [
    "HypothesisSet",
    "ObservedLayout",
    "OracleStats",
    "bound",
    "brute_force_search",
    "brute_force_solve",
    "coherence_score",
    "confidence",
    "count_displaced_components",
    "create_hypotheses",
    "find_solution",
    "solve",
    "solve_multi",
]
