"""
Configuration management for the ensemble-control toolkit.
"""

from typing import Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime settings with environment variable support."""

    # Application Configuration
    app_name: str = "ensemble-control"
    app_version: str = "1.0.0"

    # Logging Configuration
    log_level: str = "INFO"
    log_format: str = "json"

    # Integrator defaults
    rk4_substeps: int = Field(default=4, description="RK4 substeps per control interval")

    # Lie bracket machinery
    bracket_depth: int = 4
    rank_rtol: float = 1e-8

    # Series machinery
    hermite_extra_nodes: int = 8  # Gauss-Hermite nodes = 2n + extra
    fourier_min_points: int = 128

    # Optimizer defaults
    optimizer_max_iterations: int = 500

    # Execution
    threads: int = 1
    output_dir: str = "out"

    @field_validator(
        "rk4_substeps",
        "bracket_depth",
        "hermite_extra_nodes",
        "fourier_min_points",
        "optimizer_max_iterations",
        "threads",
    )
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("value must be a positive integer")
        return v

    @field_validator("rank_rtol")
    @classmethod
    def validate_rank_rtol(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError("rank_rtol must lie in (0, 1)")
        return v

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v):
        if v not in ("json", "console"):
            raise ValueError("log_format must be 'json' or 'console'")
        return v

    @field_validator("log_level")
    @classmethod
    def normalize_log_level(cls, v):
        return v.upper()

    model_config = {
        "env_file": ".env",
        "case_sensitive": False,
        "env_prefix": "ENSEMBLE_",
    }


# Global settings instance - lazy initialization
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get application settings."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


settings = get_settings()
