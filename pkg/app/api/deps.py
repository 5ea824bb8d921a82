"""
Dependency functions for API endpoints.
"""
from fastapi import Depends

from app.core.config import Settings, settings
from app.schemas.optimizer import RcgConfig
from app.schemas.system import SystemParams


def get_settings() -> Settings:
    """
    Settings the server was started with.

    Overridden in tests through ``app.dependency_overrides``.
    """
    return settings


def get_system_params(current: Settings = Depends(get_settings)) -> SystemParams:
    return current.system_params()


def get_rcg_config(current: Settings = Depends(get_settings)) -> RcgConfig:
    return current.rcg_config()
