"""
MAC staggered layout on the composite cusp grid.

u1 lives on vertical faces, u2 on horizontal faces. Vertical faces of column m
sit at x = a_m + J h1_m for J = 1..n1; J = n1 is the interface with the
coarser column m-1 and is split into the fine rows of column m (hanging
faces). Horizontal faces sit at y = K h2_m for K = 1..rows_m-1. Faces on the
outer boundary (x1 = 2^{-n_columns}, x1 = 1, x2 = 0) are not stored: they are
identically zero.

Discrete divergence is kept in mass form, B v = sum over the faces of a cell of
+-v * length, so sum_c (B v)_c = 0 whenever v vanishes on every face that
touches an inactive cell. The gradient energy is the edge sum
sum_e w_e (v_a - v_b)^2 over neighbouring faces of the same component, a
neighbour that is not free acting as a zero Dirichlet value.
"""

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Optional

import numpy as np
import pandas as pd
from cachetools import LRUCache
from scipy import sparse

from hardydiv.core.errors import ShapeError
from hardydiv.decomposition.grid import CompositeGrid

U1, U2 = 0, 1


@dataclass
class _EdgeBuffer:
    a: list[np.ndarray] = field(default_factory=list)
    b: list[np.ndarray] = field(default_factory=list)
    w: list[np.ndarray] = field(default_factory=list)
    x: list[np.ndarray] = field(default_factory=list)

    def add(self, a: np.ndarray, b: Any, w: Any, x: Any) -> None:
        a = np.asarray(a, dtype=np.int64).ravel()
        if a.size == 0:
            return
        self.a.append(a)
        self.b.append(np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape).ravel())
        self.w.append(np.broadcast_to(np.asarray(w, dtype=float), a.shape).ravel())
        self.x.append(np.broadcast_to(np.asarray(x, dtype=float), a.shape).ravel())

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        if not self.a:
            empty_i, empty_f = np.zeros(0, dtype=np.int64), np.zeros(0)
            return empty_i, empty_i.copy(), empty_f, empty_f.copy()
        return (
            np.concatenate(self.a),
            np.concatenate(self.b),
            np.concatenate(self.w),
            np.concatenate(self.x),
        )


class StaggeredLayout:
    """Face enumeration, divergence operator and energy edges for one grid."""

    def __init__(self, grid: CompositeGrid):
        self.grid = grid
        self._vmaps: list[np.ndarray] = []
        self._hmaps: list[np.ndarray] = []
        self._build_faces()
        self._build_edges()

    # ------------------------------------------------------------------
    # Faces
    # ------------------------------------------------------------------

    def _vertical_range(self, m: int) -> int:
        """Largest J of a stored vertical face in column m."""
        return self.grid.n1 if m >= 1 else self.grid.n1 - 1

    def _build_faces(self) -> None:
        grid = self.grid
        n1, rho = grid.n1, grid.rho
        comp, col, jj, kk, xs, ys, length, cell_a, cell_b = ([] for _ in range(9))
        offset = 0

        for layout in grid.columns:
            m = layout.m
            cells = grid.cell_slots(m)

            # vertical faces
            j_max = self._vertical_range(m)
            vmap = np.full((n1 + 1, layout.rows), -1, dtype=np.int64)
            if j_max >= 1:
                J, K = np.meshgrid(np.arange(1, j_max + 1), np.arange(layout.rows), indexing="ij")
                J, K = J.ravel(), K.ravel()
                left = cells[J - 1, K]
                right = np.full(J.shape, -1, dtype=np.int64)
                inner = J < n1
                right[inner] = cells[J[inner], K[inner]]
                if m >= 1 and np.any(~inner):
                    coarse = grid.cell_slots(m - 1)
                    right[~inner] = coarse[0, K[~inner] // rho]
                count = J.size
                vmap[J, K] = offset + np.arange(count)
                offset += count
                comp.append(np.full(count, U1))
                col.append(np.full(count, m))
                jj.append(J)
                kk.append(K)
                xs.append(layout.a + J * layout.h1)
                ys.append((K + 0.5) * layout.h2)
                length.append(np.full(count, layout.h2))
                cell_a.append(left)
                cell_b.append(right)
            self._vmaps.append(vmap)

            # horizontal faces
            hmap = np.full((n1, layout.rows + 1), -1, dtype=np.int64)
            if layout.rows >= 2:
                J, K = np.meshgrid(np.arange(n1), np.arange(1, layout.rows), indexing="ij")
                J, K = J.ravel(), K.ravel()
                count = J.size
                hmap[J, K] = offset + np.arange(count)
                offset += count
                comp.append(np.full(count, U2))
                col.append(np.full(count, m))
                jj.append(J)
                kk.append(K)
                xs.append(layout.a + (J + 0.5) * layout.h1)
                ys.append(K * layout.h2)
                length.append(np.full(count, layout.h1))
                cell_a.append(cells[J, K - 1])
                cell_b.append(cells[J, K])
            self._hmaps.append(hmap)

        def cat(parts: list[np.ndarray], dtype: Any) -> np.ndarray:
            return np.concatenate(parts).astype(dtype) if parts else np.zeros(0, dtype=dtype)

        self.component = cat(comp, np.int64)
        self.column = cat(col, np.int64)
        self.j = cat(jj, np.int64)
        self.k = cat(kk, np.int64)
        self.x = cat(xs, float)
        self.y = cat(ys, float)
        self.length = cat(length, float)
        self.cell_a = cat(cell_a, np.int64)
        self.cell_b = cat(cell_b, np.int64)

    @property
    def n_faces(self) -> int:
        return int(self.x.size)

    def vertical_face(self, m: int, j: int, k: int) -> int:
        return int(self._vmaps[m][j, k])

    def horizontal_face(self, m: int, j: int, k: int) -> int:
        return int(self._hmaps[m][j, k])

    # ------------------------------------------------------------------
    # Energy edges
    # ------------------------------------------------------------------

    def _build_edges(self) -> None:
        grid = self.grid
        n1, rho = grid.n1, grid.rho
        last = grid.n_columns - 1
        buf = _EdgeBuffer()

        for layout in grid.columns:
            m, h1, h2, rows = layout.m, layout.h1, layout.h2, layout.rows
            vmap, hmap = self._vmaps[m], self._hmaps[m]
            j_max = self._vertical_range(m)

            # ---- u1: vertical faces --------------------------------------
            for J in range(1, j_max + 1):
                faces = vmap[J, :rows]
                x_face = layout.a + J * h1
                K = np.arange(rows)
                if J < n1:
                    if J + 1 <= j_max:
                        buf.add(faces, vmap[J + 1, :rows], h2 / h1, x_face + 0.5 * h1)
                    else:
                        buf.add(faces, -1, h2 / h1, x_face + 0.5 * h1)
                else:
                    coarse = grid.columns[m - 1]
                    if 1 <= self._vertical_range(m - 1):
                        nb = self._vmaps[m - 1][1, K // rho]
                    else:
                        nb = -1
                    buf.add(faces, nb, h2 / coarse.h1, x_face + 0.5 * coarse.h1)
                if J == 1 and m == last:
                    buf.add(faces, -1, h2 / h1, x_face - 0.5 * h1)
                if rows >= 2:
                    buf.add(faces[:-1], faces[1:], h1 / h2, x_face)
                buf.add(faces[-1:], -1, h1 / (0.5 * h2), x_face)
                buf.add(faces[:1], -1, h1 / (0.5 * h2), x_face)

            # ---- u2: horizontal faces ------------------------------------
            if rows < 2:
                continue
            x_faces = layout.a + (np.arange(n1) + 0.5) * h1
            for K in range(1, rows):
                faces = hmap[:, K]
                if n1 >= 2:
                    buf.add(faces[:-1], faces[1:], h2 / h1, x_faces[:-1] + 0.5 * h1)
                if m == 0:
                    buf.add(faces[-1:], -1, h2 / (0.5 * h1), layout.b - 0.25 * h1)
                elif K % rho == 0:
                    coarse = grid.columns[m - 1]
                    K_c = K // rho
                    if 1 <= K_c <= coarse.rows - 1:
                        dist = 0.5 * (h1 + coarse.h1)
                        buf.add(faces[-1:], self._hmaps[m - 1][0, K_c], h2 / dist, layout.b)
                if m == last:
                    buf.add(faces[:1], -1, h2 / (0.5 * h1), layout.a + 0.25 * h1)
            for J in range(n1):
                column_faces = hmap[J, 1:rows]
                if column_faces.size >= 2:
                    buf.add(column_faces[:-1], column_faces[1:], h1 / h2, x_faces[J])
                buf.add(column_faces[:1], -1, h1 / h2, x_faces[J])
                buf.add(column_faces[-1:], -1, h1 / h2, x_faces[J])

        self.edge_a, self.edge_b, self.edge_w, self.edge_x = buf.arrays()

    # ------------------------------------------------------------------
    # Operators
    # ------------------------------------------------------------------

    @cached_property
    def divergence_matrix(self) -> sparse.csr_matrix:
        """B of shape (n_cells, n_faces): +length on the left/lower cell, -length on the other."""
        rows, cols, vals = [], [], []
        faces = np.arange(self.n_faces)
        for cells, sign in ((self.cell_a, 1.0), (self.cell_b, -1.0)):
            ok = cells >= 0
            rows.append(cells[ok])
            cols.append(faces[ok])
            vals.append(sign * self.length[ok])
        return sparse.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.grid.n_cells, self.n_faces),
        )

    def free_faces(self, columns: Optional[Iterable[int]] = None) -> np.ndarray:
        """Faces whose two adjacent cells are active and lie in the given columns."""
        both = (self.cell_a >= 0) & (self.cell_b >= 0)
        if columns is None:
            return both
        allowed = np.zeros(self.grid.n_columns, dtype=bool)
        allowed[list(columns)] = True
        cell_col = self.grid.column_index
        a = np.where(self.cell_a >= 0, self.cell_a, 0)
        b = np.where(self.cell_b >= 0, self.cell_b, 0)
        return both & allowed[cell_col[a]] & allowed[cell_col[b]]

    def energy_matrix(
        self,
        free: np.ndarray,
        edge_scale: Optional[np.ndarray] = None,
    ) -> sparse.csc_matrix:
        """K on the free faces: sum_e w_e (e_a - e_b)(e_a - e_b)^T with fixed faces at zero."""
        index = np.full(self.n_faces, -1, dtype=np.int64)
        index[free] = np.arange(int(np.count_nonzero(free)))
        w = self.edge_w if edge_scale is None else self.edge_w * edge_scale

        ia = index[self.edge_a]
        ib = np.where(self.edge_b >= 0, index[np.maximum(self.edge_b, 0)], -1)
        rows, cols, vals = [], [], []
        for sel, r, c, v in (
            (ia >= 0, ia, ia, w),
            (ib >= 0, ib, ib, w),
            ((ia >= 0) & (ib >= 0), ia, ib, -w),
            ((ia >= 0) & (ib >= 0), ib, ia, -w),
        ):
            rows.append(r[sel])
            cols.append(c[sel])
            vals.append(v[sel])
        n = int(np.count_nonzero(free))
        return sparse.csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
        )

    def edge_weights(self, weight: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Per-edge multiplier weight(x) evaluated at the edge midpoints."""
        return np.asarray(weight(self.edge_x), dtype=float)


@dataclass
class StaggeredField:
    """Face values of a vector field on a staggered layout; unset faces are zero."""

    layout: StaggeredLayout
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.layout.n_faces,):
            raise ShapeError(
                f"Expected {self.layout.n_faces} face values, got shape {self.values.shape}",
                details={"expected": self.layout.n_faces, "got": list(self.values.shape)},
            )

    @classmethod
    def zeros(cls, layout: StaggeredLayout) -> "StaggeredField":
        return cls(layout, np.zeros(layout.n_faces))

    @property
    def grid(self) -> CompositeGrid:
        return self.layout.grid

    def divergence_mass(self) -> np.ndarray:
        """(B v)_c = integral of div v over cell c."""
        return self.layout.divergence_matrix @ self.values

    def divergence(self) -> np.ndarray:
        """Cell-averaged divergence."""
        return self.divergence_mass() / self.grid.areas

    def energy(self, edge_scale: Optional[np.ndarray] = None, include_boundary: bool = True) -> float:
        """sum_e w_e (v_a - v_b)^2, optionally scaled per edge."""
        layout = self.layout
        va = self.values[layout.edge_a]
        wall = layout.edge_b < 0
        vb = np.where(wall, 0.0, self.values[np.maximum(layout.edge_b, 0)])
        w = layout.edge_w if edge_scale is None else layout.edge_w * edge_scale
        terms = w * (va - vb) ** 2
        if not include_boundary:
            terms = terms[~wall]
        return float(np.sum(terms))

    def trace_max(self, free: np.ndarray) -> float:
        """Largest |value| on faces outside `free`."""
        fixed = self.values[~free]
        return float(np.max(np.abs(fixed))) if fixed.size else 0.0

    def __add__(self, other: "StaggeredField") -> "StaggeredField":
        self.grid.require_same(other.grid)
        return StaggeredField(self.layout, self.values + other.values)

    def __mul__(self, scalar: float) -> "StaggeredField":
        return StaggeredField(self.layout, self.values * float(scalar))

    __rmul__ = __mul__

    def to_frame(self) -> pd.DataFrame:
        """Solution table with columns component, x, y, value."""
        return pd.DataFrame(
            {
                "component": np.where(self.layout.component == U1, "u1", "u2"),
                "x": self.layout.x,
                "y": self.layout.y,
                "value": self.values,
            }
        )


_layouts: LRUCache = LRUCache(maxsize=8)
_layouts_lock = threading.Lock()


def get_layout(grid: CompositeGrid) -> StaggeredLayout:
    """Shared layout per grid geometry."""
    with _layouts_lock:
        layout = _layouts.get(grid.key)
        if layout is None:
            layout = StaggeredLayout(grid)
            _layouts[grid.key] = layout
    return layout
