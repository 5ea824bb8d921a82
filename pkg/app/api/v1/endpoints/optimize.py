"""
API endpoints for single-instance two-way optimization and the gradient check.
"""
import numpy as np
from fastapi import APIRouter, Depends, HTTPException, Query

from app.api.deps import get_rcg_config, get_system_params
from app.core.errors import NumericalFailure, RisError
from app.core.logging import logger
from app.schemas.optimize import GradientCheckResponse, OptimizeRequest, OptimizeResponse
from app.schemas.optimizer import RcgConfig
from app.schemas.system import SystemParams
from app.utils.channel_model import synthesize_channels
from app.utils.objective import gradient_check, two_way_optimize

router = APIRouter()


@router.post("", response_model=OptimizeResponse)
def optimize(
    request: OptimizeRequest,
    params: SystemParams = Depends(get_system_params),
    cfg: RcgConfig = Depends(get_rcg_config),
):
    """
    Jointly optimize the RIS phases and BS beamformers for one channel realization.
    """
    logger.info(f"Received optimize request: seed={request.seed}, eta={request.eta}")
    try:
        if request.bs_ris_distance is not None:
            params = params.with_distance(request.bs_ris_distance)
        if request.ris_elements is not None:
            params = params.with_elements(request.ris_elements)
        ch = synthesize_channels(params, request.seed)
        solution = two_way_optimize(ch, params, request.eta, cfg, rng=np.random.default_rng([request.seed, 1]))
    except NumericalFailure as e:
        logger.error(f"Optimization failed: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Optimization failed: {str(e)}")
    except (RisError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))

    return OptimizeResponse(
        r_D=solution.r_D,
        r_U=solution.r_U,
        objective=solution.objective,
        iterations=solution.trace.iterations,
        termination=solution.trace.termination,
        phases=solution.b.phases.tolist(),
    )


@router.get("/gradcheck", response_model=GradientCheckResponse)
def gradcheck(
    seed: int = Query(1, ge=0, description="Seed of the random instances"),
    instances: int = Query(100, ge=1, le=1000, description="Number of random instances"),
    directions: int = Query(20, ge=1, le=100, description="Tangent directions per instance"),
):
    """
    Compare the Riemannian gradient against central finite differences.
    """
    result = gradient_check(seed, instances=instances, directions=directions)
    return GradientCheckResponse(
        instances=result.instances,
        directions=result.directions,
        max_relative_error=result.max_relative_error,
        passed=result.passed,
    )
