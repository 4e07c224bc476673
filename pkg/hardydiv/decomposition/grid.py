"""
Composite cut-cell grid over the dyadic columns of the cusp.

Column m covers D_m = (2^{-(m+1)}, 2^{-m}) with n1 cells across and a vertical
spacing h2_m = 2^{-kappa m} / n2, kappa = ceil(gamma), so neighbouring columns
nest: every coarse row of column m splits into rho = 2^kappa rows of column
m + 1. Subdomain Omega_i is the union of columns i and i + 1; the overlap B_i
is column i.

Cells keep the exact area clipped under x2 = x1^gamma; a cell is active iff
that area is positive. Quadrature points are the cell centroids.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Optional

import numpy as np

from hardydiv.core.errors import DomainError, ShapeError
from hardydiv.geometry.cusp import CuspDomain


@dataclass(frozen=True)
class ColumnLayout:
    """Geometry of one dyadic column."""
    m: int
    a: float
    b: float
    h1: float
    h2: float
    rows: int

    @property
    def width(self) -> float:
        return self.b - self.a


def _clipped_moments(
    x0: np.ndarray, x1: np.ndarray, y0: np.ndarray, y1: np.ndarray, gamma: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Area and first moments of [x0,x1] x [y0,y1] intersected with {x2 < x1^gamma}."""
    xa = np.clip(np.power(y0, 1.0 / gamma), x0, x1)
    xb = np.clip(np.power(y1, 1.0 / gamma), x0, x1)
    g1, g2, g3 = gamma + 1.0, gamma + 2.0, 2.0 * gamma + 1.0
    height = y1 - y0

    area = (xb**g1 - xa**g1) / g1 - y0 * (xb - xa) + height * (x1 - xb)
    mom_x = (xb**g2 - xa**g2) / g2 - 0.5 * y0 * (xb**2 - xa**2) + 0.5 * height * (x1**2 - xb**2)
    mom_y = (
        (xb**g3 - xa**g3) / (2.0 * g3)
        - 0.5 * y0**2 * (xb - xa)
        + 0.5 * (y1**2 - y0**2) * (x1 - xb)
    )
    return np.maximum(area, 0.0), mom_x, mom_y


@dataclass(frozen=True, eq=False)
class CompositeGrid:
    """
    Cut-cell grid over columns m = 0..n_columns-1.

    Cell slots are (m, j, k) with 0 <= j < n1 and 0 <= k < rows_m; only active
    slots receive a cell index.
    """

    gamma: float
    n_columns: int
    n1: int
    n2: int

    def __post_init__(self) -> None:
        CuspDomain(self.gamma)
        if self.n_columns < 1:
            raise DomainError(f"Grid needs at least one column, got {self.n_columns}", parameter="n_columns")
        if self.n1 < 1 or self.n2 < 1:
            raise DomainError(f"Cells per column must be >= 1, got {self.n1}x{self.n2}", parameter="resolution")

    @classmethod
    def for_subdomains(
        cls, gamma: float, n_sub: int, resolution: int, n1: Optional[int] = None
    ) -> "CompositeGrid":
        """Columns 0..n_sub (Omega_0..Omega_{n_sub-1}); resolution x resolution per subdomain."""
        if n_sub < 2:
            raise DomainError(f"n_sub must be >= 2, got {n_sub}", parameter="n_sub")
        if resolution < 2:
            raise DomainError(f"resolution must be >= 2, got {resolution}", parameter="resolution")
        return cls(gamma=gamma, n_columns=n_sub + 1, n1=n1 or max(resolution // 2, 1), n2=resolution)

    # ------------------------------------------------------------------
    # Columns
    # ------------------------------------------------------------------

    @property
    def domain(self) -> CuspDomain:
        return CuspDomain(self.gamma)

    @property
    def kappa(self) -> int:
        return int(np.ceil(self.gamma))

    @property
    def rho(self) -> int:
        """Rows of column m + 1 per row of column m."""
        return 2**self.kappa

    @cached_property
    def columns(self) -> tuple[ColumnLayout, ...]:
        layouts = []
        for m in range(self.n_columns):
            a, b = 2.0 ** (-(m + 1)), 2.0 ** (-m)
            h2 = 2.0 ** (-self.kappa * m) / self.n2
            rows = int(np.ceil(b**self.gamma / h2 * (1.0 - 1e-12)))
            layouts.append(ColumnLayout(m=m, a=a, b=b, h1=(b - a) / self.n1, h2=h2, rows=max(rows, 1)))
        return tuple(layouts)

    # ------------------------------------------------------------------
    # Cells
    # ------------------------------------------------------------------

    @cached_property
    def _layout(self) -> tuple[dict[str, np.ndarray], tuple[np.ndarray, ...]]:
        parts: dict[str, list[np.ndarray]] = {
            key: [] for key in ("col", "j", "k", "x0", "x1", "y0", "y1", "area", "cx", "cy")
        }
        slot_maps: list[np.ndarray] = []
        offset = 0
        for col in self.columns:
            jj, kk = np.meshgrid(np.arange(self.n1), np.arange(col.rows), indexing="ij")
            jj, kk = jj.ravel(), kk.ravel()
            x0 = col.a + jj * col.h1
            x1 = col.a + (jj + 1) * col.h1
            y0 = kk * col.h2
            y1 = (kk + 1) * col.h2
            area, mom_x, mom_y = _clipped_moments(x0, x1, y0, y1, self.gamma)
            active = area > 0.0

            slots = np.full((self.n1, col.rows), -1, dtype=np.int64)
            count = int(np.count_nonzero(active))
            slots[jj[active], kk[active]] = offset + np.arange(count)
            slot_maps.append(slots)
            offset += count

            a = area[active]
            parts["col"].append(np.full(count, col.m, dtype=np.int64))
            parts["j"].append(jj[active])
            parts["k"].append(kk[active])
            parts["x0"].append(x0[active])
            parts["x1"].append(x1[active])
            parts["y0"].append(y0[active])
            parts["y1"].append(y1[active])
            parts["area"].append(a)
            parts["cx"].append(mom_x[active] / a)
            parts["cy"].append(mom_y[active] / a)

        cells = {key: np.concatenate(value) for key, value in parts.items()}
        return cells, tuple(slot_maps)

    @property
    def _cells(self) -> dict[str, np.ndarray]:
        return self._layout[0]

    @property
    def n_cells(self) -> int:
        return int(self._cells["area"].size)

    def cell_slots(self, m: int) -> np.ndarray:
        """(n1, rows_m) array of cell indices, -1 for inactive slots."""
        return self._layout[1][m]

    @property
    def column_index(self) -> np.ndarray:
        return self._cells["col"]

    @property
    def areas(self) -> np.ndarray:
        return self._cells["area"]

    @property
    def nominal_areas(self) -> np.ndarray:
        h1 = np.array([c.h1 for c in self.columns])
        h2 = np.array([c.h2 for c in self.columns])
        return (h1 * h2)[self.column_index]

    @property
    def centroids(self) -> tuple[np.ndarray, np.ndarray]:
        return self._cells["cx"], self._cells["cy"]

    def cell_arrays(self) -> dict[str, np.ndarray]:
        return dict(self._cells)

    # ------------------------------------------------------------------
    # Masks
    # ------------------------------------------------------------------

    def column_mask(self, m: int) -> np.ndarray:
        return self.column_index == m

    def subdomain_columns(self, i: int) -> tuple[int, ...]:
        """Grid columns making up Omega_i (the second may lie beyond the grid)."""
        if i < 0 or i >= self.n_columns:
            raise DomainError(f"Subdomain {i} is not covered by the grid", parameter="i")
        return tuple(m for m in (i, i + 1) if m < self.n_columns)

    def subdomain_mask(self, i: int) -> np.ndarray:
        return np.isin(self.column_index, self.subdomain_columns(i))

    def column_areas(self) -> np.ndarray:
        """Discrete area of every column, summed over its cells."""
        return np.bincount(self.column_index, weights=self.areas, minlength=self.n_columns)

    # ------------------------------------------------------------------
    # Identity
    # ------------------------------------------------------------------

    @property
    def key(self) -> tuple[float, int, int, int]:
        return (float(self.gamma), self.n_columns, self.n1, self.n2)

    def same_as(self, other: "CompositeGrid") -> bool:
        return self.key == other.key

    def require_same(self, other: "CompositeGrid") -> None:
        if not self.same_as(other):
            raise ShapeError(
                "Grid mismatch",
                details={"left": list(self.key), "right": list(other.key)},
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "gamma": self.gamma,
            "n_columns": self.n_columns,
            "n1": self.n1,
            "n2": self.n2,
            "n_cells": self.n_cells,
        }


@dataclass(eq=False)
class GridFunction:
    """Piecewise-constant function on the active cells of a composite grid."""

    grid: CompositeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_cells,):
            raise ShapeError(
                f"Expected {self.grid.n_cells} cell values, got shape {self.values.shape}",
                details={"expected": self.grid.n_cells, "got": list(self.values.shape)},
            )

    @classmethod
    def zeros(cls, grid: CompositeGrid) -> "GridFunction":
        return cls(grid, np.zeros(grid.n_cells))

    @classmethod
    def from_callable(
        cls, grid: CompositeGrid, func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    ) -> "GridFunction":
        """Sample func(x1, x2) at the cell centroids."""
        cx, cy = grid.centroids
        values = np.broadcast_to(np.asarray(func(cx, cy), dtype=float), cx.shape)
        return cls(grid, values.copy())

    # ------------------------------------------------------------------
    # Quadrature
    # ------------------------------------------------------------------

    def integral(self, mask: Optional[np.ndarray] = None) -> float:
        terms = self.values * self.grid.areas
        if mask is not None:
            terms = terms[mask]
        return float(np.sum(terms))

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values) * self.grid.areas))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def column_integrals(self, absolute: bool = False) -> np.ndarray:
        vals = np.abs(self.values) if absolute else self.values
        return np.bincount(
            self.grid.column_index, weights=vals * self.grid.areas, minlength=self.grid.n_columns
        )

    def support_columns(self) -> np.ndarray:
        return np.unique(self.grid.column_index[self.values != 0.0])

    # ------------------------------------------------------------------
    # Algebra
    # ------------------------------------------------------------------

    def _coerce(self, other: "GridFunction") -> np.ndarray:
        self.grid.require_same(other.grid)
        return other.values

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.values + self._coerce(other))

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.values - self._coerce(other))

    def __mul__(self, scalar: float) -> "GridFunction":
        return GridFunction(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.grid, -self.values)

    def restricted(self, mask: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, np.where(mask, self.values, 0.0))

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.copy())
