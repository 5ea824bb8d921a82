"""
In-memory store for sweep jobs started through the HTTP service.
"""

import time
from typing import Any, Dict, List, Optional

from app.core.logging import logger
from app.schemas.sweep import SweepRecord

# Status entries and finished records, keyed by job ID
sweep_statuses: Dict[str, Dict[str, Any]] = {}
sweep_results: Dict[str, Dict[str, Any]] = {}


def create_sweep_status(job_id: str, variable: str, cells: int) -> Dict[str, Any]:
    """
    Create a new sweep status entry.

    Args:
        job_id: Generated job ID
        variable: Swept quantity
        cells: Number of (value, seed) cells in the sweep

    Returns:
        Dict[str, Any]: The newly created status
    """
    current_time = time.time()
    status = {
        "job_id": job_id,
        "variable": variable,
        "cells": cells,
        "status": "pending",
        "created_at": current_time,
        "updated_at": current_time,
        "message": "Sweep job queued",
        "error": None,
    }
    sweep_statuses[job_id] = status
    logger.info(f"Created sweep status for {job_id} ({variable}, {cells} cells)")
    return status


def get_sweep_status(job_id: str) -> Optional[Dict[str, Any]]:
    return sweep_statuses.get(job_id)


def update_sweep_status(
    job_id: str,
    status: str,
    message: Optional[str] = None,
    error: Optional[str] = None
) -> None:
    """
    Update the status of a sweep job.

    Args:
        job_id: ID of the sweep job
        status: New status value (pending, running, completed, failed)
        message: Optional status message
        error: Optional error message
    """
    if job_id not in sweep_statuses:
        return
    sweep_statuses[job_id]["status"] = status
    sweep_statuses[job_id]["updated_at"] = time.time()
    if message:
        sweep_statuses[job_id]["message"] = message
    if error:
        sweep_statuses[job_id]["error"] = error
    logger.info(f"Updated sweep status for {job_id}: {status} - {message}")


def store_sweep_result(job_id: str, records: List[SweepRecord], summary: List[Dict[str, Any]]) -> None:
    """Keep the records and summary rows of a finished sweep."""
    sweep_results[job_id] = {
        "records": records,
        "summary": summary,
        "processed_at": time.time(),
    }


def get_sweep_result(job_id: str) -> Optional[Dict[str, Any]]:
    return sweep_results.get(job_id)


def clear_old_jobs(max_age_hours: int = 24) -> int:
    """
    Remove jobs not updated within ``max_age_hours``.

    Returns:
        Number of removed jobs
    """
    max_age_seconds = max_age_hours * 3600
    current_time = time.time()
    old_keys = [
        job_id for job_id, status in sweep_statuses.items()
        if current_time - status.get("updated_at", 0) > max_age_seconds
    ]
    for job_id in old_keys:
        del sweep_statuses[job_id]
        sweep_results.pop(job_id, None)
    if old_keys:
        logger.info(f"Job cleanup completed: removed {len(old_keys)} sweep jobs")
    return len(old_keys)
