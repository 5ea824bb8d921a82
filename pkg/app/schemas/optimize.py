"""
Request/response models for the single-instance optimization API.
"""
from typing import List, Optional

from pydantic import BaseModel, Field


class OptimizeRequest(BaseModel):
    """Request model for a two-way optimization of one channel realization."""
    seed: int = Field(0, description="Channel realization seed")
    eta: float = Field(0.5, ge=0, le=1, description="Downlink weight")
    bs_ris_distance: Optional[float] = Field(None, description="Override the RIS horizontal position (m)")
    ris_elements: Optional[int] = Field(None, ge=1, description="Override F (varies F2)")


class OptimizeResponse(BaseModel):
    """Response model for a two-way optimization."""
    r_D: float = Field(..., description="Downlink rate (bit/s/Hz)")
    r_U: float = Field(..., description="Uplink rate (bit/s/Hz)")
    objective: float = Field(..., description="Weighted sum rate (bit/s/Hz)")
    iterations: int = Field(..., description="RCG iterations")
    termination: str = Field(..., description="Why the optimizer stopped")
    phases: List[float] = Field(..., description="arg(b_f) in radians")


class GradientCheckResponse(BaseModel):
    """Response model for the finite-difference gradient check."""
    instances: int
    directions: int
    max_relative_error: float
    passed: bool
