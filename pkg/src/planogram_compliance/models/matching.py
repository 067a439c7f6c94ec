"""Matching models: hypotheses, solutions and match results."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from planogram_compliance.models.planogram import GridExtent


class Hypothesis(BaseModel):
    """Candidate pairing of a reference node with an observed node of the same product."""

    model_config = ConfigDict(frozen=True)

    ref_node: str
    obs_node: str
    score: float = Field(..., ge=0)

    @property
    def key(self) -> tuple[str, str]:
        return (self.ref_node, self.obs_node)


class AssignmentSource(str, Enum):
    """Where an assignment came from."""

    DETECTION = "detection"
    VERIFICATION = "verification"


class Assignment(BaseModel):
    """One accepted (reference, observed) pair."""

    model_config = ConfigDict(frozen=True)

    ref_node: str
    obs_node: str
    score: float = Field(default=0.0, ge=0)
    source: AssignmentSource = AssignmentSource.DETECTION


class Solution(BaseModel):
    """A self-consistent, injective assignment set with its confidence."""

    model_config = ConfigDict(frozen=True)

    assignments: tuple[Assignment, ...] = ()
    confidence: float = Field(default=0.0, ge=0)
    seed_hypothesis: Hypothesis | None = None

    @model_validator(mode="after")
    def _check_injective(self) -> "Solution":
        refs = [a.ref_node for a in self.assignments]
        obs = [a.obs_node for a in self.assignments]
        if len(set(refs)) != len(refs):
            raise ValueError("solution assigns a reference node twice")
        if len(set(obs)) != len(obs):
            raise ValueError("solution assigns an observed node twice")
        return self

    def __len__(self) -> int:
        return len(self.assignments)

    @property
    def pairs(self) -> list[tuple[str, str]]:
        """(ref, obs) pairs sorted lexicographically."""
        return sorted((a.ref_node, a.obs_node) for a in self.assignments)

    @property
    def ref_to_obs(self) -> dict[str, str]:
        return {a.ref_node: a.obs_node for a in self.assignments}

    @property
    def obs_to_ref(self) -> dict[str, str]:
        return {a.obs_node: a.ref_node for a in self.assignments}


class MatchResult(BaseModel):
    """Outcome of matching an observed planogram against a reference."""

    model_config = ConfigDict(frozen=True)

    solution: Solution
    consistent_obs_nodes: frozenset[str] = frozenset()
    missing_ref_nodes: frozenset[str] = frozenset()
    localization: GridExtent | None = None

    @property
    def confidence(self) -> float:
        return self.solution.confidence
