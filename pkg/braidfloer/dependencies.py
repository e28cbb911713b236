"""FastAPI dependencies common across routes."""

from __future__ import annotations

from functools import lru_cache
from typing import Any, Dict, Optional

from fastapi import HTTPException, status

from .core.config import SolverConfig, load_solver_config
from .core.errors import FloerInputError


@lru_cache(maxsize=1)
def _base_solver_config() -> SolverConfig:
    return load_solver_config()


def get_solver_config() -> SolverConfig:
    return _base_solver_config()


def solver_config_with(overrides: Optional[Dict[str, Any]]) -> SolverConfig:
    """Per-request overrides on top of the process-wide solver config."""

    try:
        return get_solver_config().with_overrides(**(overrides or {}))
    except FloerInputError as exc:
        raise bad_request(exc) from exc


def bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
