"""Configuration management for the braid Floer generator toolkit."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError

# Load environment variables
load_dotenv()

# Project paths (two levels up from braidfloer/core/ -> repository root)
PROJECT_ROOT = Path(__file__).resolve().parents[2]


def _resolve_path(env_name: str, default: Path) -> Path:
    value = os.getenv(env_name)
    if value:
        return Path(value).expanduser().resolve()
    return default.resolve()


def _optional_path(env_name: str) -> Optional[Path]:
    value = os.getenv(env_name)
    if not value:
        return None
    return Path(value).expanduser().resolve()


def _env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in {"1", "true", "yes", "on"}


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from exc


def _env_list(name: str) -> List[str]:
    raw = os.getenv(name)
    if not raw:
        return []
    return [item.strip() for item in raw.split(",") if item.strip()]


def _env_choice(name: str, default: str, allowed: Tuple[str, ...]) -> str:
    value = os.getenv(name, default)
    if value is None:
        return default
    normalized = value.strip().lower()
    if normalized not in allowed:
        return default
    return normalized


# Keep bundled data with the package so installs carry it
RESOURCES_DIR = Path(__file__).resolve().parents[1] / "resources"

# Allow environment overrides while defaulting to package-local resources
FIXTURES_DIR = _resolve_path("FLOER_FIXTURES_DIR", RESOURCES_DIR / "fixtures")
TEMPLATES_DIR = _resolve_path("FLOER_TEMPLATES_DIR", RESOURCES_DIR / "templates")
GOERITZ_5_2_PATH = FIXTURES_DIR / "goeritz-5_2.json"
GOERITZ_5_2_REDUCED_PATH = FIXTURES_DIR / "goeritz-5_2-reduced.json"

# Saved reports live under DATA_ROOT/reports (see storage.reports)
DATA_ROOT = _resolve_path("FLOER_DATA_ROOT", PROJECT_ROOT / "data")

# Default solver-config file (JSON); values in it override env-derived defaults
CONFIG_PATH = _optional_path("FLOER_CONFIG_PATH")

DEFAULT_CONVENTION = _env_choice(
    "FLOER_DEFAULT_CONVENTION", "artin-rightmost", ("artin-rightmost", "artin-leftmost")
)

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").strip().upper()
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"

# HTTP surface
API_HOST = os.getenv("API_HOST", "127.0.0.1")
API_PORT = _env_int("API_PORT", 8000)
API_RELOAD = _env_flag("API_RELOAD")
CORS_ALLOW_ORIGINS = _env_list("CORS_ALLOW_ORIGINS") or ["http://localhost:3000", "http://127.0.0.1:3000"]

# Output formatting: floats are fixed at 12 significant digits
FLOAT_DIGITS = 12


class SolverConfig(BaseModel):
    """Tuning knobs for the numeric backend and the report filters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    grid_per_dim: int = Field(default=48, gt=0)
    newton_tol: float = Field(default=1e-12, gt=0)
    max_newton_iters: int = Field(default=50, gt=0)
    accept_residual: float = Field(default=1e-9, gt=0)
    dedupe_eps: float = Field(default=1e-6, gt=0)
    rng_seed: int = Field(default=1, ge=0)
    max_seeds: int = Field(default=48**3, gt=0)
    chunk_size: int = Field(default=4096, gt=0)
    workers: int = Field(default=2, gt=0)
    slice_tol: float = Field(default=1e-4, gt=0)
    full_grid_per_dim: int = Field(default=16, gt=0)
    prune_after: int = Field(default=8, gt=0)
    prune_residual: float = Field(default=1e-2, gt=0)
    stall_ratio: float = Field(default=1e-3, gt=0, lt=1)

    def with_overrides(self, **overrides: Any) -> "SolverConfig":
        cleaned = {key: value for key, value in overrides.items() if value is not None}
        if not cleaned:
            return self
        return _build_config({**self.model_dump(), **cleaned})


def _build_config(values: Mapping[str, Any]) -> SolverConfig:
    try:
        return SolverConfig(**values)
    except ValidationError as exc:
        raise ConfigError(f"Invalid solver configuration: {exc}") from exc


def env_solver_defaults() -> Dict[str, Any]:
    """Solver defaults after applying FLOER_* environment overrides."""

    return {
        "grid_per_dim": _env_int("FLOER_GRID_PER_DIM", 48),
        "newton_tol": _env_float("FLOER_NEWTON_TOL", 1e-12),
        "max_newton_iters": _env_int("FLOER_MAX_NEWTON_ITERS", 50),
        "accept_residual": _env_float("FLOER_ACCEPT_RESIDUAL", 1e-9),
        "dedupe_eps": _env_float("FLOER_DEDUPE_EPS", 1e-6),
        "rng_seed": _env_int("FLOER_RNG_SEED", 1),
        "max_seeds": _env_int("FLOER_MAX_SEEDS", 48**3),
        "chunk_size": _env_int("FLOER_CHUNK_SIZE", 4096),
        "workers": _env_int("FLOER_WORKERS", 2),
        "slice_tol": _env_float("FLOER_SLICE_TOL", 1e-4),
        "full_grid_per_dim": _env_int("FLOER_FULL_GRID_PER_DIM", 16),
        "prune_after": _env_int("FLOER_PRUNE_AFTER", 8),
        "prune_residual": _env_float("FLOER_PRUNE_RESIDUAL", 1e-2),
        "stall_ratio": _env_float("FLOER_STALL_RATIO", 1e-3),
    }


def load_solver_config(
    path: Optional[Path] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> SolverConfig:
    """Build a SolverConfig from env defaults, an optional JSON file, then explicit overrides.

    ``path`` defaults to FLOER_CONFIG_PATH when unset.
    """

    values: Dict[str, Any] = env_solver_defaults()
    config_path = path if path is not None else CONFIG_PATH
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError as exc:
            raise ConfigError(f"Solver config file not found: {config_path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Solver config file is not valid JSON: {config_path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"Solver config file must hold a JSON object: {config_path}")
        values.update(data)
    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})
    return _build_config(values)
