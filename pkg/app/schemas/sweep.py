"""
Schema definitions for batch experiments and their records.
"""
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from app.schemas.optimizer import RcgConfig
from app.schemas.system import SystemParams

SweepVariable = Literal["bs_ris_distance", "eta", "ris_elements"]
Scheme = Literal[
    "two_way",
    "time_sharing",
    "phase_averaging",
    "oneway_downlink_only",
    "oneway_uplink_only",
]

ALL_SCHEMES: List[str] = [
    "two_way",
    "time_sharing",
    "phase_averaging",
    "oneway_downlink_only",
    "oneway_uplink_only",
]

# Default grids per sweep variable
DEFAULT_VALUES: Dict[str, List[float]] = {
    "bs_ris_distance": [0.0, 3.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 47.0, 50.0],
    "eta": [round(0.05 * k, 2) for k in range(21)],
    "ris_elements": [float(f) for f in range(20, 201, 20)],
}


class RatePoint(BaseModel):
    """An achievable (r_D, r_U) pair and the scheme that produced it."""
    r_D: float = Field(..., ge=0, description="Downlink rate (bit/s/Hz)")
    r_U: float = Field(..., ge=0, description="Uplink rate (bit/s/Hz)")
    scheme: str = Field(..., description="Scheme label")
    eta: float = Field(..., ge=0, le=1, description="Weighting parameter")

    @property
    def weighted(self) -> float:
        """eta * r_D + (1 - eta) * r_U"""
        return self.eta * self.r_D + (1.0 - self.eta) * self.r_U


class SweepSpec(BaseModel):
    """One batch experiment: a grid over one variable, evaluated for several schemes."""
    variable: SweepVariable = Field("bs_ris_distance", description="Swept quantity")
    values: List[float] = Field(..., min_length=1, description="Grid of the swept quantity")
    schemes: List[Scheme] = Field(default_factory=lambda: list(ALL_SCHEMES), min_length=1)
    seeds: int = Field(100, ge=1, description="Channel realizations per grid value")
    base_seed: int = Field(0, description="First seed; realizations use base_seed .. base_seed+seeds-1")
    eta: float = Field(0.5, ge=0, le=1, description="Weight used when eta is not the swept variable")
    base: SystemParams = Field(default_factory=SystemParams)
    optimizer: RcgConfig = Field(default_factory=RcgConfig)
    oneway_max_rounds: int = Field(50, ge=1)
    oneway_tol: float = Field(1e-6, ge=0)
    workers: int = Field(1, ge=1, description="Process pool size for sweep cells")
    record_timing: bool = Field(False, description="Store wall time in records (breaks byte-identical output)")

    @field_validator("values")
    @classmethod
    def _finite_values(cls, values: List[float]) -> List[float]:
        if any(v != v or v in (float("inf"), float("-inf")) for v in values):
            raise ValueError("sweep values must be finite")
        return values

    @field_validator("schemes")
    @classmethod
    def _unique_schemes(cls, schemes: List[str]) -> List[str]:
        return list(dict.fromkeys(schemes))


class SweepRecord(BaseModel):
    """Result of one scheme on one channel realization."""
    scheme: str
    variable: str
    value: float
    seed: int
    eta: float
    r_D: float
    r_U: float
    objective: float = Field(..., description="eta * r_D + (1 - eta) * r_U")
    iters: int = Field(..., description="RCG iterations, or one-way rounds for heuristics")
    ms: float = Field(0.0, description="Wall time in milliseconds (0 unless timing is recorded)")


# CSV column order
RECORD_COLUMNS: List[str] = list(SweepRecord.model_fields)


class SweepJobRequest(BaseModel):
    """Request model for starting a sweep through the HTTP service."""
    variable: SweepVariable = Field("bs_ris_distance", description="Swept quantity")
    values: Optional[List[float]] = Field(None, description="Grid; defaults to the variable's standard grid")
    schemes: Optional[List[Scheme]] = Field(None, description="Schemes; defaults to all")
    seeds: int = Field(10, ge=1, le=1000, description="Channel realizations per value")
    eta: float = Field(0.5, ge=0, le=1, description="Weight when eta is not swept")


class SweepJobResponse(BaseModel):
    """Response model for sweep job creation."""
    job_id: str = Field(..., description="Job ID")
    status: str = Field("pending", description="Job status")
    message: str = Field("Sweep job started", description="Status message")


class SweepStatusResponse(BaseModel):
    """Response model for sweep job status and results."""
    job_id: str
    status: str
    message: Optional[str] = None
    record_count: int = 0
    summary: List[Dict[str, Union[float, str]]] = Field(default_factory=list, description="Median/mean per scheme and value")
    error: Optional[str] = None
