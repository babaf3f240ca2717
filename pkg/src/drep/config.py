"""Configuration loaded from environment variables."""

from __future__ import annotations

from pathlib import Path

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings

# Load .env from project root (two levels up from this file)
_env_path = Path(__file__).resolve().parent.parent.parent / ".env"
load_dotenv(_env_path)


class Settings(BaseSettings):
    # Result cache
    drep_cache: str | None = Field(default=None)

    # Computation limits
    drep_cell_budget: int = Field(default=200_000, ge=1)
    drep_word_length_cap: int = Field(default=16, ge=1)
    drep_default_max_weight: int = Field(default=6, ge=0)

    # Parallelism
    drep_jobs: int = Field(default=1, ge=1)

    model_config = {"env_prefix": "", "case_sensitive": False}

    @property
    def cache_dir(self) -> Path | None:
        """Return the expanded cache directory, or None when caching is off."""
        raw = (self.drep_cache or "").strip()
        if not raw:
            return None
        return Path(raw).expanduser()


def get_settings() -> Settings:
    """Return a fresh Settings instance."""
    return Settings()
