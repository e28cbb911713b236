"""Braid Floer generators: library, CLI and HTTP API."""

from .core import __version__

__all__ = ["__version__", "create_app"]


def __getattr__(name: str):
    # The HTTP stack loads only when the app is asked for
    if name == "create_app":
        from .api import create_app

        return create_app
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
