"""Detection evaluation models."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class Stage(str, Enum):
    """Pipeline stage at which detections are evaluated."""

    DETECTION = "detection"
    CONSISTENCY = "consistency"
    VERIFICATION = "verification"


class EvalResult(BaseModel):
    """Precision, recall and F-measure for one image (or an average)."""

    model_config = ConfigDict(frozen=True)

    tp: float = Field(default=0, ge=0)
    fp: float = Field(default=0, ge=0)
    fn: float = Field(default=0, ge=0)
    precision: float = Field(default=0.0, ge=0, le=1)
    recall: float = Field(default=0.0, ge=0, le=1)
    f_measure: float = Field(default=0.0, ge=0, le=1)

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "EvalResult":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f_measure = (
            2 * precision * recall / (precision + recall) if precision + recall else 0.0
        )
        return cls(tp=tp, fp=fp, fn=fn, precision=precision, recall=recall, f_measure=f_measure)


class DetectionMatch(BaseModel):
    """Outcome of matching detections to ground truth for one image."""

    model_config = ConfigDict(frozen=True)

    tp: int
    fp: int
    fn: int
    # (det_id, ground-truth index) pairs.
    pairing: tuple[tuple[str, int], ...] = ()

    def result(self) -> EvalResult:
        return EvalResult.from_counts(self.tp, self.fp, self.fn)


class SceneEvaluation(BaseModel):
    """Per-stage metrics of one scene."""

    model_config = ConfigDict(frozen=True)

    scene: str
    stages: dict[Stage, EvalResult]


class DatasetReport(BaseModel):
    """Macro-averaged metrics per stage plus optional per-scene rows."""

    model_config = ConfigDict(frozen=True)

    scene_count: int
    stages: dict[Stage, EvalResult]
    scenes: tuple[SceneEvaluation, ...] = ()
