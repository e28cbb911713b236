"""Braid action and fixed-point endpoints."""

from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from fastapi import APIRouter, Depends
from pydantic import BaseModel, Field

from ..core.config import SolverConfig
from ..core.errors import FloerInputError
from ..core.fixtures import available_fixtures, load_fixture
from ..core.floer_fix_solver import Mode
from ..core.main import RunRequest, cmd_action, cmd_fix
from ..dependencies import bad_request, get_solver_config, solver_config_with
from ..storage import ReportStorageError, save_report

router = APIRouter(tags=["fixed-points"])


class SourceRequest(BaseModel):
    braid: Optional[str] = Field(None, description="Braid word such as 's1 s2^-1'")
    strands: Optional[int] = Field(None, ge=2)
    fixture: Optional[str] = None
    convention: Optional[Literal["paper-fixture", "artin-rightmost", "artin-leftmost"]] = None


class FixRequest(SourceRequest):
    mode: Mode = Mode.STRICT
    backend: Literal["slice", "numeric", "both"] = "slice"
    pin: int = Field(2, ge=1)
    config: Optional[Dict[str, Any]] = None
    save: Optional[str] = Field(None, description="Also store the report under this name")


class FixtureSummary(BaseModel):
    name: str
    strands: int
    citation: Optional[str] = None
    equations: List[str]


def _request(command: str, body: SourceRequest, config: SolverConfig, **extra: Any) -> RunRequest:
    try:
        return RunRequest(
            command=command,
            braid=body.braid,
            strands=body.strands,
            fixture=body.fixture,
            convention=body.convention,
            config=config,
            output="json",
            **extra,
        )
    except FloerInputError as exc:
        raise bad_request(exc) from exc


@router.post("/action")
def braid_action(body: SourceRequest) -> Dict[str, Any]:
    """Images of the generators, or a fixture's recorded equations."""

    request = _request("action", body, SolverConfig())
    try:
        return cmd_action(request).payload
    except FloerInputError as exc:
        raise bad_request(exc) from exc


@router.post("/fix")
def fixed_points(body: FixRequest, base: SolverConfig = Depends(get_solver_config)) -> Dict[str, Any]:
    """Fixed points from the requested backend(s); disagreement is reported in ``agreement``."""

    config = solver_config_with(body.config) if body.config else base
    request = _request("fix", body, config, mode=body.mode, backend=body.backend, pin=body.pin)
    try:
        result = cmd_fix(request)
        if body.save:
            save_report(body.save, result.payload)
    except (FloerInputError, ReportStorageError) as exc:
        raise bad_request(exc) from exc
    return {**result.payload, "exit_code": int(result.exit_code)}


@router.get("/fixtures", response_model=List[FixtureSummary])
def list_fixtures() -> List[FixtureSummary]:
    summaries = []
    for name in available_fixtures():
        system = load_fixture(name)
        summaries.append(
            FixtureSummary(
                name=name,
                strands=system.strands,
                citation=system.provenance.citation,
                equations=system.describe(),
            )
        )
    return summaries
