"""
Global solution of div u = f on the cusp by summing local solutions.

f is decomposed into zero-mean pieces g_i supported in Omega_i, each piece is
solved on its strip, and the zero extensions are added face by face. The
weighted estimate is then evaluated for any admissible weight without
re-solving: neither the decomposition nor the local solves depend on omega.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from hardydiv.core.config import config_value, get_settings, load_yaml_config
from hardydiv.core.errors import InvariantViolationError, ShapeError
from hardydiv.core.logging import get_logger
from hardydiv.decomposition.engine import Decomposition, decompose
from hardydiv.decomposition.grid import GridFunction
from hardydiv.decomposition.partition import PartitionOfUnity
from hardydiv.domain.models import WeightSpec
from hardydiv.domain.report import DivSolveReport
from hardydiv.hardy.characterization import characterization_A
from hardydiv.solver.local import local_solve, relative_divergence_residual
from hardydiv.solver.norms import weighted_gradient_energy, weighted_l2_squared
from hardydiv.solver.staggered import StaggeredField, get_layout
from hardydiv.weights.catalog import admissibility, hardy_sequence

logger = get_logger("solver.global")

ASSEMBLY_TOL = 1e-12


def main_bound(gamma: float, c_omega: float, c_h: float) -> float:
    """gamma^2 2^{12+4 gamma} C_omega^8 C_H^2."""
    return float(gamma**2 * 2.0 ** (12.0 + 4.0 * gamma) * c_omega**8 * c_h**2)


def hardy_constant_upper(omega: WeightSpec, gamma: float, n: Optional[int] = None) -> float:
    """4 A_N of the induced Hardy sequence with p = 2."""
    n = config_value(load_yaml_config(), "hardy.n") if n is None else n
    u = hardy_sequence(omega, gamma, 2.0, n)
    a_value, _ = characterization_A(u, u, 2.0, n)
    return 4.0 * a_value


def verify_assembly(u: StaggeredField, pieces: list[StaggeredField]) -> None:
    """B u must equal the sum of the local divergences; otherwise a face was overwritten."""
    expected = np.zeros(u.grid.n_cells)
    for piece in pieces:
        u.grid.require_same(piece.grid)
        expected += piece.divergence_mass()
    actual = u.divergence_mass()
    scale = max(float(np.max(np.abs(expected))) if expected.size else 0.0, 1e-300)
    error = float(np.max(np.abs(actual - expected))) if expected.size else 0.0
    if error > ASSEMBLY_TOL * scale:
        raise InvariantViolationError(
            f"Assembled divergence differs from the sum of local divergences by {error:.3e}",
            invariant="additive-assembly",
            details={"error": error, "scale": scale},
        )


def assemble(pieces: list[StaggeredField]) -> StaggeredField:
    """Sum zero-extended local fields face by face."""
    if not pieces:
        raise ShapeError("Nothing to assemble")
    layout = pieces[0].layout
    total = np.zeros(layout.n_faces)
    for piece in pieces:
        layout.grid.require_same(piece.grid)
        faces = np.flatnonzero(piece.values)
        np.add.at(total, faces, piece.values[faces])
    return StaggeredField(layout, total)


@dataclass
class GlobalSolution:
    """Assembled field u with the decomposition and local solves that produced it."""
    f: GridFunction
    u: StaggeredField
    decomposition: Decomposition
    local_fields: list[StaggeredField]
    local_reports: list[DivSolveReport]
    div_residual_rel: float
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def gamma(self) -> float:
        return self.f.grid.gamma

    def evaluate(self, omega: WeightSpec, n: Optional[int] = None) -> DivSolveReport:
        """Weighted ratio and main bound for omega, reusing the solve."""
        numerator = weighted_gradient_energy(self.u, omega)
        denominator = weighted_l2_squared(self.f, omega)
        ratio = numerator / denominator if denominator > 0.0 else 0.0
        c_omega = admissibility(omega, 2.0, self.gamma).C_omega
        c_h = hardy_constant_upper(omega, self.gamma, n)
        return DivSolveReport(
            div_residual_rel=self.div_residual_rel,
            energy=self.u.energy(),
            iterations=sum(r.iterations for r in self.local_reports),
            global_ratio=float(ratio),
            main_bound=main_bound(self.gamma, c_omega, c_h),
            local_reports=list(self.local_reports),
        )


def global_solve(
    f: GridFunction,
    omega: Optional[WeightSpec] = None,
    gamma: Optional[float] = None,
    n_sub: Optional[int] = None,
    tol: Optional[float] = None,
    *,
    ramp: Optional[str] = None,
    workers: Optional[int] = None,
    n: Optional[int] = None,
) -> tuple[GlobalSolution, Optional[DivSolveReport]]:
    """
    Decompose f, solve every piece locally and assemble u = sum v_i.

    Returns the solution and, when omega is given, its weighted report.
    """
    grid = f.grid
    if gamma is not None and float(gamma) != float(grid.gamma):
        raise ShapeError(
            f"Grid built for gamma={grid.gamma}, solve requested for gamma={gamma}",
            details={"grid_gamma": grid.gamma, "gamma": gamma},
        )
    config = load_yaml_config()
    n_sub = grid.n_columns - 1 if n_sub is None else n_sub
    ramp = config_value(config, "decomposition.ramp") if ramp is None else ramp
    workers = get_settings().workers if workers is None else workers

    dec = decompose(f, PartitionOfUnity(n_sub=n_sub, ramp=ramp), n_sub)
    layout = get_layout(grid)

    def solve(i: int) -> tuple[StaggeredField, DivSolveReport]:
        return local_solve(dec.pieces[i], i, tol=tol)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(executor.map(solve, range(n_sub)))

    local_fields = [r[0] for r in results]
    local_reports = [r[1] for r in results]
    u = assemble(local_fields) if local_fields else StaggeredField.zeros(layout)
    verify_assembly(u, local_fields)

    residual = relative_divergence_residual(u, f, np.arange(grid.n_cells))
    solution = GlobalSolution(
        f=f,
        u=u,
        decomposition=dec,
        local_fields=local_fields,
        local_reports=local_reports,
        div_residual_rel=residual,
    )
    logger.info(
        f"Global solve gamma={grid.gamma} n_sub={n_sub}: residual={residual:.3e}, "
        f"{sum(r.iterations for r in local_reports)} PCG iterations"
    )
    report = solution.evaluate(omega, n) if omega is not None else None
    return solution, report
