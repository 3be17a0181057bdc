import logging

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

ENV_PREFIX = "LOGBB_"


class EngineSettings(BaseSettings):
    """Tunables of the Groebner, residue and scene engines.

    Read from LOGBB_* variables (e.g. LOGBB_MULTIPLICITY_CAP=30) and a
    ``.env`` file in the working directory; keyword arguments win.
    """

    model_config = SettingsConfigDict(
        env_prefix=ENV_PREFIX,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    groebner_step_budget: int = Field(default=20000, ge=1)
    multiplicity_cap: int = Field(default=24, ge=2)
    residue_exponent_cap: int = Field(default=24, ge=1)
    compat_samples: int = Field(default=5, ge=0)
    compat_seed: int = 0
    cross_check_charts: bool = True
    jobs: int = Field(default=1, ge=1)
    cloud_logging: bool = False
    log_level: str = "WARNING"


def load_settings() -> EngineSettings:
    settings = EngineSettings()
    logging.getLogger(__name__).debug(f"Loaded settings: {settings.model_dump()}")
    return settings


_current: EngineSettings | None = None


def get_settings() -> EngineSettings:
    global _current
    if _current is None:
        _current = load_settings()
    return _current


def use_settings(settings: EngineSettings) -> None:
    """Replace the process-wide settings (the CLI does this after parsing flags)."""
    global _current
    _current = settings
