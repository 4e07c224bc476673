"""
Partition of unity subordinate to the strips Omega_0, ..., Omega_{n_sub-1}.

Inside the overlap B_m (1 <= m <= n_sub-1) the functions phi_{m-1} and phi_m
ramp between 0 and 1; phi_0 = 1 on column 0 and phi_{n_sub-1} = 1 below
2^{-n_sub}. Two ramp coordinates are available: linear in ln x1 (default) and
linear in x1.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from hardydiv.core.errors import DomainError
from hardydiv.decomposition.grid import CompositeGrid

RAMPS = ("log", "linear")


@dataclass(frozen=True)
class PartitionOfUnity:
    """phi_i(x1), i = 0..n_sub-1, piecewise linear in the ramp coordinate."""

    n_sub: int
    ramp: str = "log"

    def __post_init__(self) -> None:
        if self.n_sub < 2:
            raise DomainError(f"n_sub must be >= 2, got {self.n_sub}", parameter="n_sub")
        if self.ramp not in RAMPS:
            raise DomainError(f"Unknown ramp '{self.ramp}', expected one of {RAMPS}", parameter="ramp")

    def ramp_coordinate(self, x1: np.ndarray, m: np.ndarray) -> np.ndarray:
        """Position t in [0, 1] of x1 across column m, 0 at 2^{-(m+1)} and 1 at 2^{-m}."""
        if self.ramp == "log":
            t = np.log2(x1) + m + 1.0
        else:
            t = x1 * np.exp2(m + 1.0) - 1.0
        return np.clip(t, 0.0, 1.0)

    @staticmethod
    def column_of(x1: np.ndarray) -> np.ndarray:
        """Dyadic column m with 2^{-(m+1)} < x1 <= 2^{-m}."""
        m = np.floor(-np.log2(x1)).astype(np.int64)
        # x1 = 2^{-m} exactly belongs to column m, whose right end it is
        exact = np.exp2(-m.astype(float)) == x1
        return np.where(exact & (m > 0), m - 1, m)

    def values(self, x1: Any) -> np.ndarray:
        """Matrix phi[i, n] = phi_i(x1[n]) of shape (n_sub, len(x1))."""
        x = np.atleast_1d(np.asarray(x1, dtype=float))
        if np.any(~((x > 0.0) & (x <= 1.0))):
            raise DomainError("Partition of unity is defined on 0 < x1 <= 1", parameter="x1")
        return self._column_values(x, self.column_of(x))

    def _column_values(self, x: np.ndarray, m: np.ndarray) -> np.ndarray:
        n = self.n_sub
        phi = np.zeros((n, x.size))
        idx = np.arange(x.size)
        t = self.ramp_coordinate(x, m)

        head = m == 0
        phi[0, idx[head]] = 1.0

        tail = m >= n
        phi[n - 1, idx[tail]] = 1.0

        mid = ~(head | tail)
        rows = m[mid]
        phi[rows - 1, idx[mid]] = t[mid]
        phi[rows, idx[mid]] = 1.0 - t[mid]
        return phi

    def evaluate(self, i: int, x1: Any) -> np.ndarray:
        if not 0 <= i < self.n_sub:
            raise DomainError(f"phi_{i} does not exist for n_sub={self.n_sub}", parameter="i")
        return self.values(x1)[i]

    def on_grid(self, grid: CompositeGrid) -> np.ndarray:
        """phi_i at every cell centroid, using the grid's own column index."""
        cx, _ = grid.centroids
        return self._column_values(cx, grid.column_index)

    def midpoint(self, m: int) -> float:
        """Point of B_m where phi_{m-1} = phi_m = 1/2."""
        if not 1 <= m <= self.n_sub - 1:
            raise DomainError(f"B_{m} carries no ramp for n_sub={self.n_sub}", parameter="m")
        if self.ramp == "log":
            return float(2.0 ** (-(m + 0.5)))
        return float(3.0 * 2.0 ** (-(m + 2)))

    def to_dict(self) -> dict[str, Any]:
        return {"n_sub": self.n_sub, "ramp": self.ramp}


def build_partition_of_unity(gamma: float, n_sub: int, ramp: str = "log") -> PartitionOfUnity:
    """Partition of unity for the first n_sub strips of the cusp with exponent gamma."""
    from hardydiv.geometry.cusp import CuspDomain

    CuspDomain(gamma)
    return PartitionOfUnity(n_sub=n_sub, ramp=ramp)
