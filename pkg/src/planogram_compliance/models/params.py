"""Tunable parameters for each pipeline stage."""

from pydantic import BaseModel, ConfigDict, Field


class BuilderParams(BaseModel):
    """Observed-graph construction parameters."""

    model_config = ConfigDict(frozen=True)

    # A neighbour is admissible iff centre distance <= alpha * mean of the two diagonals.
    alpha: float = Field(default=1.2, gt=0)
    sector_half_width_deg: float = Field(default=22.5, gt=0, le=22.5)


class SolverParams(BaseModel):
    """Sub-graph isomorphism search parameters."""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(default=0.25, ge=0, le=1)
    lambda_penalty: float = Field(default=1.0, ge=0)
    prune: bool = True


class VerifyParams(BaseModel):
    """Product verification parameters."""

    model_config = ConfigDict(frozen=True)

    roi_margin: float = Field(default=0.5, ge=0)
    accept_threshold: float = Field(default=0.5, ge=0, le=1)
    overlap_iou_max: float = Field(default=0.3, ge=0, le=1)
    zncc_scales: tuple[float, ...] = (0.8, 1.0, 1.25)


class NoiseParams(BaseModel):
    """Detector nuisance model used by the simulator."""

    model_config = ConfigDict(frozen=True)

    miss_rate: float = Field(default=0.0, ge=0, le=1)
    fp_rate: float = Field(default=0.0, ge=0, le=1)
    confusion_rate: float = Field(default=0.0, ge=0, le=1)
    jitter_sigma: float = Field(default=0.0, ge=0)
    seed: int = 0
