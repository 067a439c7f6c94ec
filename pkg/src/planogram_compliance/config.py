"""Configuration management using Pydantic Settings."""

import json
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic import Field
from pydantic_settings import (
    BaseSettings,
    JsonConfigSettingsSource,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from planogram_compliance.errors import FormatError
from planogram_compliance.models.params import BuilderParams, NoiseParams, SolverParams, VerifyParams


class LogLevel(str, Enum):
    """Logging levels."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class MatcherName(str, Enum):
    """Verification matchers selectable from the command line."""

    ORACLE = "oracle"
    ZNCC = "zncc"


class Settings(BaseSettings):
    """Engine settings loaded from ``PLANOGRAM_*`` environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="PLANOGRAM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        json_file=None,
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        """Constructor values, then ``json_file``, then environment and ``.env``."""
        return (
            init_settings,
            JsonConfigSettingsSource(settings_cls),
            env_settings,
            dotenv_settings,
            file_secret_settings,
        )

    # Graph construction
    alpha: float = Field(default=1.2, gt=0, description="Neighbour distance factor on the mean diagonal")
    sector_half_width_deg: float = Field(default=22.5, gt=0, le=22.5)

    # Consistency check
    tau: float = Field(default=0.25, ge=0.0, le=1.0, description="Minimum hypothesis score")
    lambda_penalty: float = Field(default=1.0, ge=0.0)
    prune: bool = Field(default=True)

    # Verification
    matcher: MatcherName = Field(default=MatcherName.ORACLE)
    roi_margin: float = Field(default=0.5, ge=0.0)
    accept_threshold: float = Field(default=0.5, ge=0.0, le=1.0)
    overlap_iou_max: float = Field(default=0.3, ge=0.0, le=1.0)

    # Simulation
    seed: int = Field(default=0, ge=0)
    miss_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    fp_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    confusion_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    jitter_sigma: float = Field(default=0.0, ge=0.0)
    void_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    n_products: int = Field(default=24, ge=1)
    cell_w: float = Field(default=40.0, gt=0)
    cell_h: float = Field(default=40.0, gt=0)

    # Evaluation
    iou_threshold: float = Field(default=0.5, ge=0.0, le=1.0)
    workers: int = Field(default=4, ge=1, description="Scenes evaluated concurrently")

    # Logging
    log_level: LogLevel = Field(default=LogLevel.INFO)
    log_json: bool = Field(default=True)

    def builder_params(self) -> BuilderParams:
        return BuilderParams(alpha=self.alpha, sector_half_width_deg=self.sector_half_width_deg)

    def solver_params(self) -> SolverParams:
        return SolverParams(tau=self.tau, lambda_penalty=self.lambda_penalty, prune=self.prune)

    def verify_params(self) -> VerifyParams:
        return VerifyParams(
            roi_margin=self.roi_margin,
            accept_threshold=self.accept_threshold,
            overlap_iou_max=self.overlap_iou_max,
        )

    def noise_params(self) -> NoiseParams:
        return NoiseParams(
            miss_rate=self.miss_rate,
            fp_rate=self.fp_rate,
            confusion_rate=self.confusion_rate,
            jitter_sigma=self.jitter_sigma,
            seed=self.seed,
        )


def check_config_file(path: Path) -> None:
    """
    Fail early on a config file that pydantic-settings could not source.

    Raises:
        FormatError: If the file cannot be read or is not a JSON object
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: cannot read config: {e}") from e
    if not isinstance(data, dict):
        raise FormatError(f"{path}: config must be a JSON object")


def load_settings(config_file: Path | None = None, **overrides: Any) -> Settings:
    """
    Build settings with precedence flags > config file > environment > defaults.

    ``None`` overrides are ignored so unset command-line flags fall through.
    Raises ``pydantic.ValidationError`` for out-of-range values.
    """
    values = {k: v for k, v in overrides.items() if v is not None}
    if config_file is None:
        return Settings(**values)
    check_config_file(config_file)

    class FileSettings(Settings):
        model_config = SettingsConfigDict(json_file=Path(config_file))

    return FileSettings(**values)


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
