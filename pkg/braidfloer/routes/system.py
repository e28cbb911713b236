"""System and diagnostics endpoints."""

from __future__ import annotations

from typing import Dict

from fastapi import APIRouter, Depends, status

from ..core.config import DATA_ROOT, DEFAULT_CONVENTION, FIXTURES_DIR, SolverConfig
from ..dependencies import get_solver_config
from ..storage import list_reports

router = APIRouter(prefix="/system", tags=["system"])


@router.get("/status", status_code=status.HTTP_204_NO_CONTENT)
async def noop() -> None:
    """Simple smoke endpoint that can be used by load balancers."""
    return None


@router.get("/config")
async def get_system_config(config: SolverConfig = Depends(get_solver_config)) -> Dict[str, object]:
    """Active solver defaults and storage locations."""
    return {
        "solver": config.model_dump(),
        "default_convention": DEFAULT_CONVENTION,
        "fixtures_dir": str(FIXTURES_DIR),
        "data_root": str(DATA_ROOT),
        "saved_reports": list_reports(),
    }
