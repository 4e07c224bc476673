"""Weighted norms of grid functions and staggered fields."""

from typing import Optional, Union

import numpy as np

from hardydiv.core.errors import ShapeError
from hardydiv.decomposition.grid import GridFunction
from hardydiv.domain.models import WeightSpec
from hardydiv.solver.staggered import StaggeredField
from hardydiv.weights.catalog import log_weight


def _check_gamma(grid_gamma: float, gamma: Optional[float]) -> None:
    if gamma is not None and float(gamma) != float(grid_gamma):
        raise ShapeError(
            f"Field lives on a gamma={grid_gamma} grid, weight requested for gamma={gamma}",
            details={"grid_gamma": grid_gamma, "gamma": gamma},
        )


def gradient_edge_scale(field: StaggeredField, omega: WeightSpec, gamma: float) -> np.ndarray:
    """x1^{2(gamma-1)} omega(x1)^{-2} at every energy edge."""
    x = field.layout.edge_x
    return np.exp(2.0 * (gamma - 1.0) * np.log(x) - 2.0 * log_weight(omega, x))


def weighted_gradient_energy(
    field: StaggeredField,
    omega: WeightSpec,
    gamma: Optional[float] = None,
    *,
    include_boundary: bool = True,
) -> float:
    """int |Du|^2 x1^{2(gamma-1)} omega^{-2} with the face-difference stencil."""
    grid_gamma = field.grid.gamma
    _check_gamma(grid_gamma, gamma)
    scale = gradient_edge_scale(field, omega, grid_gamma)
    return field.energy(edge_scale=scale, include_boundary=include_boundary)


def weighted_l2_squared(f: GridFunction, omega: WeightSpec, gamma: Optional[float] = None) -> float:
    """int |f|^2 omega^{-2} by centroid quadrature."""
    _check_gamma(f.grid.gamma, gamma)
    cx, _ = f.grid.centroids
    scale = np.exp(-2.0 * log_weight(omega, cx))
    return float(np.sum(f.values**2 * scale * f.grid.areas))


def weighted_norms(
    obj: Union[StaggeredField, GridFunction],
    omega: WeightSpec,
    gamma: Optional[float] = None,
    *,
    include_boundary: bool = True,
) -> float:
    """
    Weighted norm of a field or a function.

    StaggeredField: (int |Du|^2 x1^{2(gamma-1)} omega^{-2})^{1/2}.
    GridFunction:   (int |f|^2 omega^{-2})^{1/2}.
    """
    if isinstance(obj, StaggeredField):
        return float(np.sqrt(weighted_gradient_energy(obj, omega, gamma, include_boundary=include_boundary)))
    if isinstance(obj, GridFunction):
        return float(np.sqrt(weighted_l2_squared(obj, omega, gamma)))
    raise ShapeError(f"Cannot take a weighted norm of {type(obj).__name__}")
