"""
API router for version 1 of the API.
"""
from fastapi import APIRouter

from app.api.v1.endpoints import optimize, sweep

api_router = APIRouter()

api_router.include_router(optimize.router, prefix="/optimize", tags=["optimize"])
api_router.include_router(sweep.router, prefix="/sweep", tags=["sweep"])
