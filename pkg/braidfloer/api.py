"""FastAPI application factory and global middleware registration."""

from __future__ import annotations

import logging
from typing import Dict

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware

from .core import __version__
from .core.config import CORS_ALLOW_ORIGINS
from .core.main import configure_logging
from .routes import fixed_points_router, invariants_router, system_router

logger = logging.getLogger("braidfloer.api")


def create_app() -> FastAPI:
    """Create and configure the FastAPI application."""

    configure_logging()
    app = FastAPI(
        title="Braid Floer API",
        version=__version__,
        description="Fixed points of braid actions on traceless SU(2) representations.",
    )

    app.add_middleware(
        CORSMiddleware,
        allow_origins=CORS_ALLOW_ORIGINS,
        allow_credentials=False,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    app.include_router(fixed_points_router)
    app.include_router(invariants_router)
    app.include_router(system_router)

    @app.get("/health", tags=["system"])
    async def healthcheck() -> Dict[str, str]:
        """Simple healthcheck endpoint for orchestration probes."""
        return {"status": "ok", "version": __version__}

    @app.middleware("http")
    async def error_logging_middleware(request: Request, call_next):
        try:
            return await call_next(request)
        except Exception as exc:
            logger.exception(
                "Unhandled exception during %s %s - %s: %s",
                request.method,
                request.url.path,
                type(exc).__name__,
                exc,
            )
            raise

    return app


app = create_app()
