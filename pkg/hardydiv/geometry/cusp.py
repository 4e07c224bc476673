"""
Cusp domain Omega = {0 < x1 < 1, 0 < x2 < x1^gamma} and its dyadic partition.

Strips Omega_i = {2^{-(i+2)} < x1 < 2^{-i}} for i >= 0, overlaps
B_i = Omega_i cap Omega_{i-1} = {2^{-(i+1)} < x1 < 2^{-i}} and tails
W_i = union of Omega_k for k >= i.
"""

from dataclasses import dataclass
from typing import Any, Optional, Union

import numpy as np

from hardydiv.core.config import config_value, load_yaml_config
from hardydiv.core.errors import DomainError
from hardydiv.core.logging import get_logger
from hardydiv.domain.models import StarShapeCert
from hardydiv.domain.report import StarShapeReport

ArrayLike = Union[float, np.ndarray]

logger = get_logger("geometry.cusp")

_CHUNK = 2048


def _check_index(i: int, minimum: int = 0) -> int:
    if int(i) != i or i < minimum:
        raise DomainError(f"Subdomain index must be an integer >= {minimum}, got {i}", parameter="i")
    return int(i)


@dataclass(frozen=True)
class CuspDomain:
    """Planar cusp with exponent gamma >= 1 (convex for gamma = 1)."""

    gamma: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.gamma) and self.gamma >= 1.0):
            raise DomainError(f"gamma must be >= 1, got {self.gamma}", parameter="gamma")

    # ------------------------------------------------------------------
    # Membership
    # ------------------------------------------------------------------

    def contains(self, x1: ArrayLike, x2: ArrayLike) -> Any:
        """0 < x1 < 1 and 0 < x2 < x1^gamma; non-finite coordinates are outside."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        with np.errstate(invalid="ignore"):
            inside = (
                np.isfinite(x1)
                & np.isfinite(x2)
                & (x1 > 0.0)
                & (x1 < 1.0)
                & (x2 > 0.0)
                & (x2 < np.power(np.clip(x1, 0.0, None), self.gamma))
            )
        return bool(inside) if inside.ndim == 0 else inside

    def in_closure(
        self, x1: np.ndarray, x2: np.ndarray, lo: float, hi: float, tol: float
    ) -> np.ndarray:
        """Membership in the closure of {lo < x1 < hi} cap Omega with tolerance."""
        return (
            (x1 >= lo - tol)
            & (x1 <= hi + tol)
            & (x2 >= -tol)
            & (x2 <= np.power(np.clip(x1, 0.0, None), self.gamma) + tol)
        )

    def multiplicity(self, x1: ArrayLike, max_index: int = 64) -> np.ndarray:
        """Number of strips Omega_i (i <= max_index) whose x1-range contains x1."""
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        count = np.zeros(x1.shape, dtype=int)
        for i in range(max_index + 1):
            lo, hi = self.strip_bounds(i)
            count += (x1 > lo) & (x1 < hi)
        return count

    # ------------------------------------------------------------------
    # Measures
    # ------------------------------------------------------------------

    @property
    def measure_constant(self) -> float:
        """C_gamma = (1 - 2^{-2(gamma+1)}) / (gamma + 1)."""
        g1 = self.gamma + 1.0
        return float(-np.expm1(-2.0 * g1 * np.log(2.0)) / g1)

    def strip_bounds(self, i: int) -> tuple[float, float]:
        i = _check_index(i)
        return 2.0 ** (-(i + 2)), 2.0 ** (-i)

    def overlap_bounds(self, i: int) -> tuple[float, float]:
        i = _check_index(i, minimum=1)
        return 2.0 ** (-(i + 1)), 2.0 ** (-i)

    def subdomain_measure(self, i: int) -> float:
        """|Omega_i| = C_gamma 2^{-(gamma+1) i}."""
        i = _check_index(i)
        return self.measure_constant * 2.0 ** (-(self.gamma + 1.0) * i)

    def overlap_measure(self, i: int) -> float:
        """|B_i| = (1 - 2^{-(gamma+1)}) / (gamma+1) 2^{-(gamma+1) i}; B_0 does not exist."""
        if i == 0:
            raise DomainError("B_0 is undefined: Omega_0 has no predecessor", parameter="i")
        i = _check_index(i, minimum=1)
        g1 = self.gamma + 1.0
        return float(-np.expm1(-g1 * np.log(2.0)) / g1 * 2.0 ** (-g1 * i))

    def tail_measure(self, i: int) -> float:
        """|W_i| = 2^{-(gamma+1) i} / (gamma+1)."""
        i = _check_index(i)
        g1 = self.gamma + 1.0
        return 2.0 ** (-g1 * i) / g1

    def column_area(self, lo: float, hi: float) -> float:
        """Area of Omega between x1 = lo and x1 = hi."""
        g1 = self.gamma + 1.0
        return (hi**g1 - lo**g1) / g1

    # ------------------------------------------------------------------
    # Star-shape certificates
    # ------------------------------------------------------------------

    def star_shape_cert(self, i: int) -> StarShapeCert:
        i = _check_index(i)
        gamma = self.gamma
        rho = 2.0 ** (-gamma * (i + 2))
        r = 2.0 ** (-gamma * (i + 2) - 1.0) / gamma
        R = 2.0 ** (-i + 1)
        center = (2.0 ** (-i) - r, r)
        return StarShapeCert(gamma=gamma, i=i, R=R, r=r, rho=rho, center=center)

    def sample_strip(
        self,
        rng: np.random.Generator,
        n: int,
        lo: float,
        hi: float,
        y_min: float = 0.0,
    ) -> np.ndarray:
        """n uniform points of Omega cap [lo, hi] x [y_min, inf) by rejection."""
        height = hi**self.gamma
        out = np.empty((0, 2))
        while out.shape[0] < n:
            batch = max(2 * (n - out.shape[0]), 64)
            x1 = rng.uniform(lo, hi, batch)
            x2 = rng.uniform(y_min, height, batch)
            keep = x2 < x1**self.gamma
            out = np.vstack([out, np.column_stack([x1[keep], x2[keep]])])
        return out[:n]

    @staticmethod
    def sample_ball(
        rng: np.random.Generator, n: int, center: tuple[float, float], radius: float
    ) -> np.ndarray:
        """n uniform points of the open disc."""
        radii = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
        angles = rng.uniform(0.0, 2.0 * np.pi, n)
        return np.column_stack(
            [center[0] + radii * np.cos(angles), center[1] + radii * np.sin(angles)]
        )

    def verify_star_shaped(
        self,
        i: int,
        n_samples: int,
        seed: int,
        *,
        segment_points: Optional[int] = None,
        boundary_tol: Optional[float] = None,
    ) -> StarShapeReport:
        """
        Sample segments from points of Omega_i to points of the certificate ball.

        Counts segments leaving closure(Omega_i), records the minimal slope
        |y2 - x2| / |y1 - x1| for points y in the corner region above the ball,
        and checks x1 <= |x| <= sqrt(2) x1 at every sampled point.
        """
        config = load_yaml_config()
        if segment_points is None:
            segment_points = config_value(config, "geometry.segment_points")
        if boundary_tol is None:
            boundary_tol = config_value(config, "geometry.boundary_tol")
        if n_samples < 0:
            raise DomainError(f"n_samples must be >= 0, got {n_samples}", parameter="n_samples")

        cert = self.star_shape_cert(i)
        report = StarShapeReport(
            cert=cert, n_samples=n_samples, seed=seed, segment_points=segment_points
        )
        if n_samples == 0:
            return report

        rng = np.random.default_rng(seed)
        lo, hi = self.strip_bounds(i)
        t = np.linspace(0.0, 1.0, segment_points)

        for start in range(0, n_samples, _CHUNK):
            size = min(_CHUNK, n_samples - start)
            ys = self.sample_strip(rng, size, lo, hi)
            xs = self.sample_ball(rng, size, cert.center, cert.r)
            z1 = ys[:, :1] + t[None, :] * (xs[:, :1] - ys[:, :1])
            z2 = ys[:, 1:] + t[None, :] * (xs[:, 1:] - ys[:, 1:])
            inside = self.in_closure(z1, z2, lo, hi, boundary_tol)
            report.violations += int(np.count_nonzero(~np.all(inside, axis=1)))
            report.distance_violations += self._distance_violations(ys)
            report.distance_violations += self._distance_violations(xs)

        # corner region: 2^{-i} - 2r < y1 < 2^{-i}, y2 >= (2^{-i} - 2r)^gamma
        corner_lo = hi - 2.0 * cert.r
        ys = self.sample_strip(rng, n_samples, corner_lo, hi, y_min=corner_lo**self.gamma)
        xs = self.sample_ball(rng, n_samples, cert.center, cert.r)
        dx = np.abs(ys[:, 0] - xs[:, 0])
        dy = np.abs(ys[:, 1] - xs[:, 1])
        with np.errstate(divide="ignore"):
            slopes = np.where(dx > 0.0, dy / dx, np.inf)
        report.critical_samples = int(n_samples)
        report.min_slope = float(np.min(slopes))

        if report.violations:
            logger.warning(
                f"Star-shape violations on Omega_{i} (gamma={self.gamma}): {report.violations}"
            )
        return report

    @staticmethod
    def _distance_violations(points: np.ndarray) -> int:
        x1 = points[:, 0]
        norm = np.hypot(points[:, 0], points[:, 1])
        ok = (x1 <= norm * (1.0 + 1e-15)) & (norm <= np.sqrt(2.0) * x1 * (1.0 + 1e-15))
        return int(np.count_nonzero(~ok))


# ----------------------------------------------------------------------
# Functional forms
# ----------------------------------------------------------------------


def contains(domain: CuspDomain, x: tuple[float, float]) -> bool:
    return bool(domain.contains(x[0], x[1]))


def subdomain_measure(gamma: float, i: int) -> float:
    return CuspDomain(gamma).subdomain_measure(i)


def overlap_measure(gamma: float, i: int) -> float:
    return CuspDomain(gamma).overlap_measure(i)


def star_shape_cert(gamma: float, i: int) -> StarShapeCert:
    return CuspDomain(gamma).star_shape_cert(i)


def verify_star_shaped(gamma: float, i: int, n_samples: int, seed: int) -> StarShapeReport:
    return CuspDomain(gamma).verify_star_shaped(i, n_samples, seed)
