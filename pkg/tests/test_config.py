"""Tests for environment-driven settings."""

import pytest
from pydantic import ValidationError

from drep.config import get_settings


def test_defaults(monkeypatch):
    """Without overrides the limits take their documented defaults."""
    for name in ("DREP_CACHE", "DREP_CELL_BUDGET", "DREP_WORD_LENGTH_CAP", "DREP_DEFAULT_MAX_WEIGHT", "DREP_JOBS"):
        monkeypatch.delenv(name, raising=False)
    settings = get_settings()
    assert settings.drep_cell_budget == 200_000
    assert settings.drep_word_length_cap == 16
    assert settings.drep_default_max_weight == 6
    assert settings.drep_jobs == 1
    assert settings.cache_dir is None


def test_environment_overrides(monkeypatch, tmp_path):
    """Each setting reads its DREP_ variable."""
    monkeypatch.setenv("DREP_CELL_BUDGET", "10")
    monkeypatch.setenv("DREP_JOBS", "4")
    monkeypatch.setenv("DREP_CACHE", f"  {tmp_path}  ")
    settings = get_settings()
    assert settings.drep_cell_budget == 10
    assert settings.drep_jobs == 4
    assert settings.cache_dir == tmp_path


def test_invalid_limits_are_rejected(monkeypatch):
    """A zero budget fails validation."""
    monkeypatch.setenv("DREP_CELL_BUDGET", "0")
    with pytest.raises(ValidationError):
        get_settings()
