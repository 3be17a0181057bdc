import os
from pathlib import Path

import pytest

import logbb
from logbb.algebra import Ambient
from logbb.app_utils.config import ENV_PREFIX, EngineSettings, use_settings

SCENES = Path(logbb.__file__).parent / "scenes"


@pytest.fixture(autouse=True)
def default_settings(monkeypatch: pytest.MonkeyPatch) -> EngineSettings:
    """Every test starts from the default engine settings, ignoring LOGBB_* variables."""
    for name in [key for key in os.environ if key.startswith(ENV_PREFIX)]:
        monkeypatch.delenv(name)
    settings = EngineSettings(_env_file=None)
    use_settings(settings)
    return settings


@pytest.fixture
def xy() -> Ambient:
    return Ambient(("x", "y"))


@pytest.fixture
def xyz() -> Ambient:
    return Ambient(("x", "y", "z"))


@pytest.fixture
def scenes_dir() -> Path:
    return SCENES
