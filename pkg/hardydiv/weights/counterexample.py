"""
Truncated integrals of f(x) = (1 - ln x1)^{-1} x1^{-gamma-1} on the cusp.

With beta = -(gamma+1)/2 the weighted L^2 norm of f stays bounded while its
L^1 norm diverges, so f has no decomposition into zero-mean pieces with finite
weighted norm unless the weights on both sides differ.
"""

import numpy as np

from hardydiv.core.errors import DomainError
from hardydiv.geometry.cusp import CuspDomain


def _check_epsilon(epsilon: float) -> float:
    if not (np.isfinite(epsilon) and 0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}", parameter="epsilon")
    return float(epsilon)


def counterexample_integrals(gamma: float, epsilon: float) -> tuple[float, float]:
    """
    (int |f|, int f^2 x1^{gamma+1}) over the cusp restricted to x1 > epsilon.

    Integrating out x2 leaves int_eps^1 x1^{-1} (1 - ln x1)^{-k} dx1 with k = 1, 2:
    ln(1 - ln eps) and 1 - 1/(1 - ln eps).
    """
    CuspDomain(gamma)
    epsilon = _check_epsilon(epsilon)
    s = -np.log(epsilon)
    l1 = float(np.log1p(s))
    weighted = float(s / (1.0 + s))
    return l1, weighted


def counterexample_density(gamma: float, x1: np.ndarray) -> np.ndarray:
    """f(x1) = (1 - ln x1)^{-1} x1^{-gamma-1}."""
    x = np.asarray(x1, dtype=float)
    return 1.0 / ((1.0 - np.log(x)) * x ** (gamma + 1.0))
