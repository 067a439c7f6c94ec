"""Product verification: ROI estimation, proposal scoring and the verification loop."""

from planogram_compliance.verification.context import SceneContext
from planogram_compliance.verification.matchers import (
    Matcher,
    MatcherRegistry,
    OracleMatcher,
    ZnccMatcher,
    zncc_match,
    zncc_score,
)
from planogram_compliance.verification.verifier import (
    estimate_roi,
    score_proposal,
    select_target,
    verify_all,
)

__all__ = [
    "Matcher",
    "MatcherRegistry",
    "OracleMatcher",
    "SceneContext",
    "ZnccMatcher",
    "estimate_roi",
    "score_proposal",
    "select_target",
    "verify_all",
    "zncc_match",
    "zncc_score",
]
