"""
Versioned library of zero-mean test functions.

Functions are products of a polynomial in t = x2 / x1^gamma and a smooth bump
in log2 x1, made exactly mean-free on the grid by subtracting a multiple of a
second, positive profile with the same support. Bump the version whenever a
definition changes so sweep tables stay comparable.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from hardydiv.core.errors import DataError, DomainError
from hardydiv.decomposition.grid import CompositeGrid, GridFunction

LIBRARY_VERSION = "1"


def _bump(s: np.ndarray) -> np.ndarray:
    """C^1 bump (s(1-s))^2 on [0, 1], zero outside."""
    inside = (s > 0.0) & (s < 1.0)
    return np.where(inside, (s * (1.0 - s)) ** 2, 0.0)


def _profiles(grid: CompositeGrid, first: int, last: int) -> tuple[np.ndarray, np.ndarray]:
    """(t-shaped, positive) profiles supported on columns first..last."""
    cx, cy = grid.centroids
    t = np.clip(cy / cx**grid.gamma, 0.0, 1.0)
    s = (-np.log2(cx) - first) / (last - first + 1)
    radial = _bump(s)
    vertical = 1.0 + 3.0 * t - 4.0 * t**2
    return radial * vertical, radial * (1.0 + t)


def _mean_free(grid: CompositeGrid, values: np.ndarray, positive: np.ndarray) -> np.ndarray:
    areas = grid.areas
    mass = float(np.sum(positive * areas))
    if mass <= 0.0:
        raise DataError("Test function support holds no grid cells")
    out = values - float(np.sum(values * areas)) / mass * positive
    # one refinement pass for the rounding left by the first subtraction
    return out - float(np.sum(out * areas)) / mass * positive


def bump(grid: CompositeGrid, column: int, width: int = 1) -> GridFunction:
    """Zero-mean polynomial-times-bump on columns column..column+width-1."""
    last = column + width - 1
    if column < 0 or last >= grid.n_columns:
        raise DomainError(f"Columns {column}..{last} are not on the grid", parameter="column")
    shaped, positive = _profiles(grid, column, last)
    return GridFunction(grid, _mean_free(grid, shaped, positive))


def dipole(grid: CompositeGrid, plus: Optional[int] = None, minus: int = 0) -> GridFunction:
    """Positive bump mass in column `plus` (default: last), balanced by column `minus`."""
    plus = grid.n_columns - 1 if plus is None else plus
    if not (0 <= plus < grid.n_columns and 0 <= minus < grid.n_columns) or plus == minus:
        raise DomainError(f"Dipole needs two distinct grid columns, got {plus}, {minus}", parameter="column")
    _, pos_plus = _profiles(grid, plus, plus)
    _, pos_minus = _profiles(grid, minus, minus)
    areas = grid.areas
    values = pos_plus / float(np.sum(pos_plus * areas))
    values = values - pos_minus / float(np.sum(pos_minus * areas))
    return GridFunction(grid, _mean_free(grid, values, pos_minus))


def column_blocks(grid: CompositeGrid, plus: int, minus: int) -> GridFunction:
    """+1 on column `plus` and a constant on column `minus` balancing the mass."""
    areas = grid.column_areas()
    values = np.zeros(grid.n_cells)
    values[grid.column_mask(plus)] = 1.0
    values[grid.column_mask(minus)] = -areas[plus] / areas[minus]
    f = GridFunction(grid, values)
    positive = grid.column_mask(minus).astype(float)
    return GridFunction(grid, _mean_free(grid, f.values, positive))


def random_zero_mean(
    grid: CompositeGrid, seed: int, columns: Optional[Sequence[int]] = None
) -> GridFunction:
    """Seeded uniform(-1, 1) cell values on the given columns, shifted to zero mean."""
    rng = np.random.default_rng(seed)
    values = rng.uniform(-1.0, 1.0, grid.n_cells)
    mask = np.ones(grid.n_cells, dtype=bool)
    if columns is not None:
        mask = np.isin(grid.column_index, list(columns))
        values = np.where(mask, values, 0.0)
    return GridFunction(grid, _mean_free(grid, values, mask.astype(float)))


@dataclass(frozen=True)
class LibraryEntry:
    """Named library entry."""
    name: str
    description: str
    build: Callable[[CompositeGrid, int], GridFunction]


LIBRARY: dict[str, LibraryEntry] = {
    entry.name: entry
    for entry in (
        LibraryEntry(
            "dipole",
            "bump mass in the deepest column balanced in column 0",
            lambda grid, seed: dipole(grid),
        ),
        LibraryEntry(
            "bump0",
            "zero-mean bump inside column 0 (single subdomain)",
            lambda grid, seed: bump(grid, 0),
        ),
        LibraryEntry(
            "chain",
            "zero-mean bump across every column",
            lambda grid, seed: bump(grid, 0, grid.n_columns),
        ),
        LibraryEntry(
            "random",
            "seeded uniform cell values, zero mean",
            lambda grid, seed: random_zero_mean(grid, seed),
        ),
    )
}


def library_function(name: str, grid: CompositeGrid, seed: int = 0) -> GridFunction:
    if name not in LIBRARY:
        raise DomainError(
            f"Unknown test function '{name}', expected one of {sorted(LIBRARY)}",
            parameter="test_function",
        )
    return LIBRARY[name].build(grid, seed)
