"""
Configuration management for the decomposition-space engine
"""

from functools import lru_cache
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Engine settings using Pydantic BaseSettings"""

    model_config = SettingsConfigDict(
        env_prefix="DECOMP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Application settings
    app_name: str = Field(default="decompspace", description="Tool name written into reports")
    version: str = Field(default="1.0.0", description="Tool version written into reports")
    log_level: str = Field(default="WARNING", description="Threshold for structured log events")

    # Report settings
    report_verbosity: Literal["summary", "full"] = Field(
        default="summary",
        description="summary omits passing witnesses and functional tables beyond the requested ones",
    )
    workers: int = Field(default=4, ge=1, description="Threads used for independent CLI checks")

    # Checker settings
    decomposition_condition: Literal[1, 2, 3, 4] = Field(
        default=1, description="Condition used to certify decomposition-space preconditions"
    )
    key_lemma_replay: bool = Field(default=True, description="Replay the key lemma proof route")
    exhaustive_arity: int = Field(
        default=6, ge=1, description="Largest arity walked by the exhaustive simplex-category checks"
    )

    # Monitoring settings
    enable_metrics: bool = Field(default=True)
    metrics_textfile: Optional[str] = Field(
        default=None, description="Write the metrics registry here after each CLI run"
    )


# Global settings instance
settings = Settings()


@lru_cache
def get_settings() -> Settings:
    return settings
