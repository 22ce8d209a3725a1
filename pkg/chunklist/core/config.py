"""
Library configuration using Pydantic Settings
"""
import os
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from CHUNKLIST_* environment variables"""

    model_config = SettingsConfigDict(
        env_prefix="CHUNKLIST_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"
    log_dir: str = "logs"

    # Parallelism
    parallel_enabled: bool = True
    worker_count: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    sequential_threshold: int = Field(default=4, ge=0)
    search_strategy: Literal["linear", "binary"] = "linear"
    gil_fallback: bool = True

    # Benchmark defaults
    bench_chunk_size: int = Field(default=1000, ge=1)
    bench_repetitions: int = Field(default=7, ge=1)
    bench_seed: int = 42

    # Observability & Monitoring
    logfire_api_key: str = ""
    enable_monitoring: bool = True


# Global settings instance
settings = Settings()
