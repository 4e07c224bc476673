"""Shared fixtures: small grids, weights and an isolated report store."""

import pytest

from hardydiv.core.cache import get_factorization_cache
from hardydiv.decomposition.grid import CompositeGrid
from hardydiv.decomposition.library import bump, dipole
from hardydiv.services.persistence import FileReportStore
from hardydiv.weights.catalog import log_power_weight, power_weight


@pytest.fixture(autouse=True)
def clear_factorization_cache():
    """Local factorizations must not leak between tests."""
    get_factorization_cache().clear()
    yield
    get_factorization_cache().clear()


@pytest.fixture
def small_grid():
    """gamma = 2, three strips, 4 x 8 cells per column."""
    return CompositeGrid.for_subdomains(2.0, 3, 8)


@pytest.fixture
def convex_grid():
    """gamma = 1 (the convex triangle), three strips."""
    return CompositeGrid.for_subdomains(1.0, 3, 8)


@pytest.fixture
def dipole_f(small_grid):
    return dipole(small_grid)


@pytest.fixture
def bump0_f(small_grid):
    return bump(small_grid, 0)


@pytest.fixture
def unit_weight():
    return power_weight(0.0)


@pytest.fixture
def log_weight_spec():
    return log_power_weight(1.0)


@pytest.fixture
def store(tmp_path):
    return FileReportStore(root=tmp_path / "reports")
