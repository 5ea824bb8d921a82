"""
API endpoints for background sweep jobs.
"""
import uuid

from fastapi import APIRouter, BackgroundTasks, Depends, HTTPException, Path
from pydantic import ValidationError

from app.api.deps import get_settings
from app.core.config import Settings
from app.core.logging import logger
from app.schemas.sweep import SweepJobRequest, SweepJobResponse, SweepSpec, SweepStatusResponse
from app.utils.job_store import (
    clear_old_jobs,
    create_sweep_status,
    get_sweep_result,
    get_sweep_status,
    store_sweep_result,
    update_sweep_status,
)
from app.utils.sweep import execute_sweep, summarize

router = APIRouter()


def run_sweep_job(job_id: str, spec: SweepSpec) -> None:
    """
    Background task body: run the sweep and store its records and summary.
    """
    update_sweep_status(job_id, "running", "Sweep running")
    try:
        outcome = execute_sweep(spec)
        summary = summarize(outcome.records).to_dict(orient="records")
        store_sweep_result(job_id, outcome.records, summary)
        update_sweep_status(
            job_id,
            "completed",
            f"{len(outcome.records)} records, {len(outcome.failures)} failed evaluations",
        )
    except Exception as e:
        logger.error(f"Sweep job {job_id} failed: {str(e)}", exc_info=True)
        update_sweep_status(job_id, "failed", "Sweep failed", error=str(e))


@router.post("", response_model=SweepJobResponse, status_code=202)
async def start_sweep(
    request: SweepJobRequest,
    background_tasks: BackgroundTasks,
    current: Settings = Depends(get_settings),
):
    """
    Start a sweep over distance, eta or the number of RIS elements.
    """
    logger.info(f"Received sweep request: {request.variable}, {request.seeds} seeds")
    try:
        spec = current.sweep_spec(
            variable=request.variable,
            values=request.values,
            schemes=request.schemes,
            seeds=request.seeds,
            eta=request.eta,
        )
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=str(e))

    clear_old_jobs()
    job_id = uuid.uuid4().hex
    create_sweep_status(job_id, spec.variable, len(spec.values) * spec.seeds)
    background_tasks.add_task(run_sweep_job, job_id, spec)

    return SweepJobResponse(job_id=job_id, status="pending", message="Sweep job started")


@router.get("/{job_id}", response_model=SweepStatusResponse)
async def get_sweep(job_id: str = Path(..., description="Sweep job ID")):
    """
    Status of a sweep job; completed jobs include the per-(scheme, value) summary.
    """
    status = get_sweep_status(job_id)
    if not status:
        raise HTTPException(status_code=404, detail="Sweep job not found")

    result = get_sweep_result(job_id) or {}
    return SweepStatusResponse(
        job_id=job_id,
        status=status["status"],
        message=status.get("message"),
        record_count=len(result.get("records", [])),
        summary=result.get("summary", []),
        error=status.get("error"),
    )
