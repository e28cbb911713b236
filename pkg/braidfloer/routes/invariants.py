"""Signature and Euler-consistency endpoints."""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from fastapi import APIRouter, Depends
from pydantic import BaseModel

from ..core.config import SolverConfig
from ..core.errors import FloerInputError
from ..core.knot_invariants import SymmetricIntMatrix
from ..core.main import RunRequest, cmd_check, cmd_signature
from ..dependencies import bad_request, get_solver_config, solver_config_with
from .fixed_points import FixRequest

router = APIRouter(tags=["invariants"])


class SignatureRequest(BaseModel):
    matrix: List[List[int]]
    mu: int = 0


class CheckRequest(FixRequest):
    matrix: Optional[List[List[int]]] = None
    mu: int = 0
    signature: Optional[int] = None


@router.post("/signature")
def signature(body: SignatureRequest) -> Dict[str, Any]:
    try:
        request = RunRequest(
            command="signature",
            matrix=SymmetricIntMatrix.from_rows(body.matrix),
            mu=body.mu,
            output="json",
        )
        return cmd_signature(request).payload
    except FloerInputError as exc:
        raise bad_request(exc) from exc


@router.post("/check")
def check(body: CheckRequest, base: SolverConfig = Depends(get_solver_config)) -> Dict[str, Any]:
    """Parity and bound verdicts for the fixed-point count against σ/2."""

    config = solver_config_with(body.config) if body.config else base
    try:
        request = RunRequest(
            command="check",
            braid=body.braid,
            strands=body.strands,
            fixture=body.fixture,
            convention=body.convention,
            mode=body.mode,
            backend=body.backend,
            pin=body.pin,
            config=config,
            output="json",
            matrix=SymmetricIntMatrix.from_rows(body.matrix) if body.matrix is not None else None,
            mu=body.mu,
            signature=body.signature,
        )
        result = cmd_check(request)
    except FloerInputError as exc:
        raise bad_request(exc) from exc
    return {**result.payload, "exit_code": int(result.exit_code)}
