import numpy as np
import pytest

from app.core.config import Settings
from app.schemas.optimizer import RcgConfig
from app.schemas.system import SystemParams


@pytest.fixture
def settings() -> Settings:
    return Settings(_env_file=None)


@pytest.fixture
def params(settings) -> SystemParams:
    """Simulation defaults: M=4, F=60, BS (0,0), RIS (45,5), user (50,0)."""
    return settings.system_params()


@pytest.fixture
def small_params(params) -> SystemParams:
    """Same scenario with a 2x2 RIS and a 2-antenna BS."""
    return params.model_copy(update={"M": 2, "F1": 2, "F2": 2})


@pytest.fixture
def cfg() -> RcgConfig:
    return RcgConfig()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
