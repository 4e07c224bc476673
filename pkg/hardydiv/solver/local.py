"""
Minimal-energy solution of div v = g on one strip Omega_i.

    minimize  v^T K v   subject to  B v = g * area,  v = 0 off the free faces

is solved through its dual: S mu = g * area with S = B K^{-1} B^T, followed by
v = K^{-1} B^T mu. S is applied matrix-free; K is factorized once per patch
and shared through the factorization cache. S is singular with the constant
vector as kernel, so right-hand sides and residuals are kept mean-free.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, cg, factorized

from hardydiv.core.cache import FactorizationCache, get_factorization_cache, make_cache_key
from hardydiv.core.config import config_value, load_yaml_config
from hardydiv.core.errors import ConfigurationError, ConvergenceError, PreconditionError
from hardydiv.core.logging import get_logger
from hardydiv.decomposition.engine import ZERO_MEAN_TOL
from hardydiv.decomposition.grid import GridFunction
from hardydiv.domain.report import DivSolveReport
from hardydiv.solver.staggered import StaggeredField, StaggeredLayout, get_layout

logger = get_logger("solver.local")

INNER_SOLVERS = ("direct", "cg")


@dataclass
class PatchOperator:
    """Divergence and energy operators restricted to the free faces of one patch."""
    subdomain: int
    cells: np.ndarray
    free: np.ndarray
    B: sparse.csr_matrix
    K: sparse.csc_matrix
    solve_K: Callable[[np.ndarray], np.ndarray]
    weights: np.ndarray

    @property
    def n_cells(self) -> int:
        return int(self.cells.size)

    def schur(self) -> LinearOperator:
        """S = B K^{-1} B^T as a matrix-free operator."""
        def matvec(mu: np.ndarray) -> np.ndarray:
            return self.B @ self.solve_K(self.B.T @ np.ravel(mu))

        return LinearOperator((self.n_cells, self.n_cells), matvec=matvec, dtype=float)

    def field_from_multiplier(self, mu: np.ndarray) -> np.ndarray:
        return self.solve_K(self.B.T @ mu)


def _inner_solver(K: sparse.csc_matrix, inner: str, inner_tol: float) -> Callable[[np.ndarray], np.ndarray]:
    if inner == "direct":
        return factorized(K)

    def solve(rhs: np.ndarray) -> np.ndarray:
        x, info = cg(K, rhs, rtol=inner_tol, atol=0.0, maxiter=10 * K.shape[0])
        if info != 0:
            raise ConvergenceError(f"Inner energy solve did not converge (info={info})")
        return x

    return solve


def patch_operator(
    layout: StaggeredLayout,
    i: int,
    *,
    inner: str = "direct",
    inner_tol: float = 1e-12,
    cache: Optional[FactorizationCache] = None,
) -> PatchOperator:
    """Operators for Omega_i, built once per grid geometry and inner solver."""
    if inner not in INNER_SOLVERS:
        raise ConfigurationError(f"Unknown inner solver '{inner}', expected one of {INNER_SOLVERS}")
    cache = cache or get_factorization_cache()
    key = make_cache_key(layout.grid.key, i, inner, inner_tol)

    def build() -> PatchOperator:
        grid = layout.grid
        columns = grid.subdomain_columns(i)
        cells = np.flatnonzero(np.isin(grid.column_index, columns))
        free = layout.free_faces(columns)
        B = layout.divergence_matrix[cells][:, np.flatnonzero(free)].tocsr()
        K = layout.energy_matrix(free)
        logger.debug(
            f"Patch Omega_{i}: {cells.size} cells, {int(np.count_nonzero(free))} free faces"
        )
        return PatchOperator(
            subdomain=i,
            cells=cells,
            free=free,
            B=B,
            K=K,
            solve_K=_inner_solver(K, inner, inner_tol),
            weights=1.0 / grid.nominal_areas[cells],
        )

    return cache.get_or_build(key, build)


def schur_pcg(
    S: LinearOperator,
    b: np.ndarray,
    precond: np.ndarray,
    *,
    tol: float,
    max_iter: int,
    stagnation_window: int,
) -> tuple[np.ndarray, list[float]]:
    """
    Preconditioned conjugate gradients for S x = b on the mean-free subspace.

    `precond` is a diagonal approximation of S^{-1}. Convergence is measured in
    the preconditioner norm, ||r||_P / ||b||_P <= tol. Raises ConvergenceError
    with the residual history on stagnation or at max_iter.
    """
    x = np.zeros_like(b)
    r = b - b.mean()
    z = precond * r
    norm_b = float(np.sqrt(r @ z))
    if norm_b == 0.0:
        return x, [0.0]

    p = z.copy()
    rz = float(r @ z)
    history = [1.0]
    best, best_iter = 1.0, 0

    for it in range(1, max_iter + 1):
        Sp = S.matvec(p)
        step = rz / float(p @ Sp)
        x += step * p
        r -= step * Sp
        r -= r.mean()
        z = precond * r
        rz_new = float(r @ z)
        residual = float(np.sqrt(max(rz_new, 0.0))) / norm_b
        history.append(residual)
        if residual <= tol:
            return x, history
        if residual < best:
            best, best_iter = residual, it
        elif it - best_iter >= stagnation_window:
            raise ConvergenceError(
                f"Schur PCG stagnated at residual {best:.3e} after {it} iterations",
                residuals=history,
            )
        p = z + (rz_new / rz) * p
        rz = rz_new

    raise ConvergenceError(
        f"Schur PCG reached {max_iter} iterations at residual {history[-1]:.3e}",
        residuals=history,
    )


def relative_divergence_residual(field: StaggeredField, g: GridFunction, cells: np.ndarray) -> float:
    """||B v - g area||_P / ||g area||_P over the given cells, P = 1 / nominal area."""
    grid = g.grid
    target = (g.values * grid.areas)[cells]
    diff = field.divergence_mass()[cells] - target
    weights = 1.0 / grid.nominal_areas[cells]
    denom = float(np.sqrt(np.sum(target**2 * weights)))
    if denom == 0.0:
        return float(np.sqrt(np.sum(diff**2 * weights)))
    return float(np.sqrt(np.sum(diff**2 * weights))) / denom


def local_solve(
    g: GridFunction,
    i: int,
    *,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    inner: Optional[str] = None,
    inner_tol: Optional[float] = None,
    stagnation_window: Optional[int] = None,
    cache: Optional[FactorizationCache] = None,
) -> tuple[StaggeredField, DivSolveReport]:
    """Solve div v = g on Omega_i with v = 0 on the boundary of Omega_i."""
    config = load_yaml_config()
    tol = config_value(config, "solver.tol") if tol is None else tol
    max_iter = config_value(config, "solver.max_iter") if max_iter is None else max_iter
    inner = config_value(config, "solver.inner") if inner is None else inner
    inner_tol = config_value(config, "solver.inner_tol") if inner_tol is None else inner_tol
    if stagnation_window is None:
        stagnation_window = config_value(config, "solver.stagnation_window")

    grid = g.grid
    layout = get_layout(grid)
    columns = grid.subdomain_columns(i)
    inside = np.isin(grid.column_index, columns)
    if np.any(g.values[~inside] != 0.0):
        raise PreconditionError(f"Right-hand side must be supported in Omega_{i}")

    rhs = (g.values * grid.areas)[inside]
    total, l1 = float(np.sum(rhs)), float(np.sum(np.abs(rhs)))
    if abs(total) > ZERO_MEAN_TOL * l1:
        raise PreconditionError(
            f"Right-hand side on Omega_{i} has integral {total:.3e} (L1 {l1:.3e})",
            integral=total,
        )

    cert = grid.domain.star_shape_cert(i)
    field = StaggeredField.zeros(layout)
    if l1 == 0.0:
        return field, DivSolveReport(
            div_residual_rel=0.0, energy=0.0, iterations=0,
            local_ratio=0.0, cd_bound=cert.cd_bound, subdomain=i,
        )

    op = patch_operator(layout, i, inner=inner, inner_tol=inner_tol, cache=cache)
    mu, history = schur_pcg(
        op.schur(), rhs, op.weights,
        tol=tol, max_iter=max_iter, stagnation_window=stagnation_window,
    )
    field.values[op.free] = op.field_from_multiplier(mu)

    energy = field.energy()
    g_norm = float(np.sqrt(np.sum((g.values**2 * grid.areas)[inside])))
    report = DivSolveReport(
        div_residual_rel=relative_divergence_residual(field, g, op.cells),
        energy=energy,
        iterations=len(history) - 1,
        local_ratio=float(np.sqrt(energy)) / g_norm,
        cd_bound=cert.cd_bound,
        subdomain=i,
    )
    logger.debug(
        f"Local solve Omega_{i}: {report.iterations} iterations, "
        f"residual={report.div_residual_rel:.3e}, ratio={report.local_ratio:.4g}"
    )
    return field, report
