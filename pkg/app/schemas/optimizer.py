"""
Schema definitions for the Riemannian conjugate gradient optimizer.
"""
from typing import Literal

from pydantic import BaseModel, Field


class RcgConfig(BaseModel):
    """Stopping and line-search parameters of the RCG driver."""
    model_config = {"frozen": True}

    max_iters: int = Field(1000, ge=1, description="Maximum number of RCG iterations")
    grad_tol: float = Field(1e-6, ge=0, description="Stop when the Riemannian gradient norm is at most this")
    armijo_initial_step: float = Field(1.0, gt=0, description="First trial step of the backtracking search")
    armijo_shrink: float = Field(0.5, gt=0, lt=1, description="Backtracking factor")
    armijo_slope: float = Field(1e-4, gt=0, lt=1, description="Sufficient-increase constant")
    restart_on_negative_beta: bool = Field(True, description="Clamp the Polak-Ribiere parameter at zero (PR+)")
    initial_point: Literal["ones", "random"] = Field("ones", description="Starting point of the first run")
    starts: int = Field(1, ge=1, description="Number of starts; extra starts use random phases")
