"""Application configuration using Pydantic Settings."""

import os

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="SPECTRAL_LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"

    # Workers (SPECTRAL_LAB_THREADS)
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    # Numerics
    bound_tolerance: float = 1e-9
    max_batch_amplitudes: int = Field(default=2**22, ge=2)
    default_sigma: float = 0.01
    default_omega_max_track: int = 64


settings = Settings()
