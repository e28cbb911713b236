"""Application service helpers."""

from .seed_pool import PoolStats, SeedPool

__all__ = [
    "PoolStats",
    "SeedPool",
]
