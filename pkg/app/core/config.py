"""
Configuration settings for the RIS two-way beamforming toolkit.

Scenario files are dotenv files (KEY=value per line). Complex values are JSON
literals, e.g. ``RIS_POSITION=[45, 5]``. Environment variables override file
values, which is how ``RIS_SEED`` overrides the default base seed.
"""
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings

from app.core.errors import ConfigError
from app.schemas.optimizer import RcgConfig
from app.schemas.sweep import ALL_SCHEMES, DEFAULT_VALUES, Scheme, SweepSpec, SweepVariable
from app.schemas.system import SystemParams

DEFAULTS_KEYWORD = "defaults"


def dbm_to_watts(dbm: float) -> float:
    """Convert dBm to W."""
    return 10.0 ** (dbm / 10.0) / 1000.0


def db_to_linear(db: float) -> float:
    """Convert dB to a linear power ratio."""
    return 10.0 ** (db / 10.0)


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables and scenario files.
    """
    API_V1_STR: str = "/api/v1"
    PROJECT_NAME: str = "RIS Two-Way Beamforming"
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Optional[str] = None

    # Default base seed for sweeps and single runs
    RIS_SEED: int = 0

    # Scenario
    BS_ANTENNAS: int = 4
    RIS_ROWS: int = 10
    RIS_COLUMNS: int = 6
    DOWNLINK_POWER_W: float = 5.0
    UPLINK_POWER_W: float = 0.5
    DOWNLINK_NOISE_DBM: float = -70.0
    UPLINK_NOISE_DBM: float = -70.0
    DOWNLINK_FREQ_MHZ: float = 1855.0
    UPLINK_FREQ_MHZ: float = 1760.0
    BS_POSITION: Tuple[float, float] = (0.0, 0.0)
    RIS_POSITION: Tuple[float, float] = (45.0, 5.0)
    USER_POSITION: Tuple[float, float] = (50.0, 0.0)
    RICIAN_BS_RIS: float = 2.0
    RICIAN_RIS_USER: float = 0.5
    PATHLOSS_EXP_BS_RIS: float = 2.0
    PATHLOSS_EXP_RIS_USER: float = 2.8
    REFERENCE_LOSS_DB: float = -30.0
    REFERENCE_DISTANCE_M: float = 1.0
    REFERENCE_FREQ_MHZ: float = 1000.0
    ANTENNA_SPACING: float = 0.5

    # Optimizer
    RCG_MAX_ITERS: int = 1000
    RCG_GRAD_TOL: float = 1e-6
    ARMIJO_INITIAL_STEP: float = 1.0
    ARMIJO_SHRINK: float = 0.5
    ARMIJO_SLOPE: float = 1e-4
    RCG_RESTART_ON_NEGATIVE_BETA: bool = True
    RCG_INITIAL_POINT: Literal["ones", "random"] = "ones"
    RCG_STARTS: int = 1

    # One-way alternating designs
    ONEWAY_MAX_ROUNDS: int = 50
    ONEWAY_TOL: float = 1e-6

    # Sweeps
    SWEEP_VARIABLE: SweepVariable = "bs_ris_distance"
    SWEEP_VALUES: Optional[List[float]] = None
    SWEEP_SCHEMES: List[Scheme] = Field(default_factory=lambda: list(ALL_SCHEMES))
    SWEEP_SEEDS: int = 100
    SWEEP_ETA: float = 0.5
    SWEEP_WORKERS: int = 1
    RECORD_TIMING: bool = False

    model_config = {
        "env_file": ".env",
        "case_sensitive": True,
        "extra": "ignore"
    }

    def system_params(self) -> SystemParams:
        """Scenario in linear units."""
        return SystemParams(
            M=self.BS_ANTENNAS,
            F1=self.RIS_ROWS,
            F2=self.RIS_COLUMNS,
            P_D_max=self.DOWNLINK_POWER_W,
            P_U_max=self.UPLINK_POWER_W,
            sigma2_D=dbm_to_watts(self.DOWNLINK_NOISE_DBM),
            sigma2_U=dbm_to_watts(self.UPLINK_NOISE_DBM),
            f_D=self.DOWNLINK_FREQ_MHZ * 1e6,
            f_U=self.UPLINK_FREQ_MHZ * 1e6,
            bs_pos=self.BS_POSITION,
            ris_pos=self.RIS_POSITION,
            user_pos=self.USER_POSITION,
            beta_BR=self.RICIAN_BS_RIS,
            beta_Ru=self.RICIAN_RIS_USER,
            alpha_BR=self.PATHLOSS_EXP_BS_RIS,
            alpha_Ru=self.PATHLOSS_EXP_RIS_USER,
            C0=db_to_linear(self.REFERENCE_LOSS_DB),
            D0=self.REFERENCE_DISTANCE_M,
            f0=self.REFERENCE_FREQ_MHZ * 1e6,
            antenna_spacing_fraction=self.ANTENNA_SPACING,
        )

    def rcg_config(self) -> RcgConfig:
        """Optimizer settings."""
        return RcgConfig(
            max_iters=self.RCG_MAX_ITERS,
            grad_tol=self.RCG_GRAD_TOL,
            armijo_initial_step=self.ARMIJO_INITIAL_STEP,
            armijo_shrink=self.ARMIJO_SHRINK,
            armijo_slope=self.ARMIJO_SLOPE,
            restart_on_negative_beta=self.RCG_RESTART_ON_NEGATIVE_BETA,
            initial_point=self.RCG_INITIAL_POINT,
            starts=self.RCG_STARTS,
        )

    def sweep_spec(self, **overrides) -> SweepSpec:
        """
        Sweep described by this configuration.

        Keyword overrides (e.g. from CLI flags) replace individual SweepSpec
        fields; ``None`` values are ignored.
        """
        variable = overrides.pop("variable", None) or self.SWEEP_VARIABLE
        # Configured values belong to the configured variable only
        values = self.SWEEP_VALUES if variable == self.SWEEP_VARIABLE else None
        fields = {
            "variable": variable,
            "values": values or DEFAULT_VALUES[variable],
            "schemes": self.SWEEP_SCHEMES,
            "seeds": self.SWEEP_SEEDS,
            "base_seed": self.RIS_SEED,
            "eta": self.SWEEP_ETA,
            "base": self.system_params(),
            "optimizer": self.rcg_config(),
            "oneway_max_rounds": self.ONEWAY_MAX_ROUNDS,
            "oneway_tol": self.ONEWAY_TOL,
            "workers": self.SWEEP_WORKERS,
            "record_timing": self.RECORD_TIMING,
        }
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return SweepSpec(**fields)


def load_settings(path: Optional[str] = None) -> Settings:
    """
    Load settings from a scenario file.

    Args:
        path: Path to a dotenv scenario file, ``"defaults"`` for the documented
            defaults, or None for the process environment and ``./.env``

    Returns:
        Validated Settings

    Raises:
        ConfigError: If the file does not exist or a value fails validation
    """
    try:
        if path is None:
            return Settings()
        if path == DEFAULTS_KEYWORD:
            return Settings(_env_file=None)
        if not Path(path).is_file():
            raise ConfigError(f"config file not found: {path}")
        return Settings(_env_file=path)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e


settings = Settings()
