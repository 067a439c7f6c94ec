"""Registry of proposal matchers selectable by name."""

import structlog

from planogram_compliance.errors import UnknownMatcherError
from planogram_compliance.models.params import VerifyParams
from planogram_compliance.verification.matchers.base import Matcher
from planogram_compliance.verification.matchers.oracle import OracleMatcher
from planogram_compliance.verification.matchers.zncc import ZnccMatcher

logger = structlog.get_logger()


class MatcherRegistry:
    """
    Registry for verification matchers.

    The oracle and ZNCC matchers are registered on construction; further
    matchers (feature-based, for instance) can be added at runtime.
    """

    def __init__(self, params: VerifyParams | None = None):
        self._matchers: dict[str, Matcher] = {}
        self._setup_default_matchers(params or VerifyParams())

    def _setup_default_matchers(self, params: VerifyParams) -> None:
        self.register(OracleMatcher())
        self.register(ZnccMatcher(scales=params.zncc_scales))

    def register(self, matcher: Matcher) -> Matcher:
        """
        Register a matcher under its name.

        Args:
            matcher: The matcher to register

        Returns:
            The registered matcher
        """
        if matcher.name in self._matchers:
            logger.warning("matcher_overwrite", name=matcher.name)

        self._matchers[matcher.name] = matcher
        logger.debug("matcher_registered", name=matcher.name)
        return matcher

    def get(self, name: str) -> Matcher:
        """
        Look a matcher up by name.

        Raises:
            UnknownMatcherError: If nothing is registered under ``name``
        """
        matcher = self._matchers.get(name)
        if matcher is None:
            raise UnknownMatcherError(name)
        return matcher

    def names(self) -> list[str]:
        return sorted(self._matchers)
