"""API routers for the FastAPI backend."""

from .fixed_points import router as fixed_points_router
from .invariants import router as invariants_router
from .system import router as system_router

__all__ = [
    "fixed_points_router",
    "invariants_router",
    "system_router",
]
