"""Exception hierarchy shared by the engine, the CLI and the HTTP routes."""

from __future__ import annotations


class FloerInputError(ValueError):
    """Raised when user-supplied input (braid text, matrices, fixtures, config) is invalid.

    The CLI maps this family to exit code 2 and the API to HTTP 400.
    """


class ConfigError(FloerInputError):
    """Raised when a solver configuration value is missing or out of range."""
