import pytest

from braidfloer.core.config import SolverConfig


@pytest.fixture
def small_config() -> SolverConfig:
    """A coarse grid that still resolves the bundled fixtures."""
    return SolverConfig(grid_per_dim=12, workers=1, chunk_size=512)
