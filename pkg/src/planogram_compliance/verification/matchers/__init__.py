"""Pluggable detection-proposal matchers."""

from planogram_compliance.verification.matchers.base import Matcher
from planogram_compliance.verification.matchers.oracle import OracleMatcher
from planogram_compliance.verification.matchers.registry import MatcherRegistry
from planogram_compliance.verification.matchers.zncc import ZnccMatcher, zncc_match, zncc_score

__all__ = [
    "Matcher",
    "MatcherRegistry",
    "OracleMatcher",
    "ZnccMatcher",
    "zncc_match",
    "zncc_score",
]
