"""
Zero-mean decomposition f = sum_i g_i subordinate to the strips.

    f_i = f phi_i
    h_i = chi_{B_i} / |B_i| * int sum_{k>=i} f_k          (1 <= i <= n_sub-1)
    g_0 = f_0 + h_1,   g_i = f_i + h_{i+1} - h_i,   h_{n_sub} = 0

|B_i| is the discrete area of grid column i, so int h_i equals the suffix
mass to rounding and every g_i has zero mean on the grid.
"""

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from hardydiv.core.errors import DegenerateInputError, DomainError, PreconditionError, TailMassError
from hardydiv.core.logging import get_logger
from hardydiv.decomposition.grid import GridFunction
from hardydiv.decomposition.partition import PartitionOfUnity
from hardydiv.domain.models import SequenceWeight, WeightSpec
from hardydiv.domain.report import DecompositionReport
from hardydiv.hardy.characterization import characterization_A, conjugate_exponent
from hardydiv.weights.catalog import log_weight

logger = get_logger("decomposition.engine")

ZERO_MEAN_TOL = 1e-10


@dataclass
class Decomposition:
    """Pieces g_i with the partition pieces f_i and corrections h_i that built them."""
    f: GridFunction
    pou: PartitionOfUnity
    pieces: list[GridFunction]
    parts: list[GridFunction]
    corrections: list[Optional[GridFunction]]
    suffix_mass: np.ndarray
    report: DecompositionReport

    @property
    def n_sub(self) -> int:
        return self.pou.n_sub

    def reconstruct(self) -> GridFunction:
        total = np.zeros_like(self.f.values)
        for piece in self.pieces:
            total = total + piece.values
        return GridFunction(self.f.grid, total)

    def to_dict(self) -> dict[str, Any]:
        return {
            "report": self.report.to_dict(),
            "pou": self.pou.to_dict(),
            "suffix_mass": self.suffix_mass.tolist(),
            "piece_integrals": [p.integral() for p in self.pieces],
        }


def _check_zero_mean(f: GridFunction) -> None:
    integral, l1 = f.integral(), f.l1_norm()
    if abs(integral) > ZERO_MEAN_TOL * l1:
        raise PreconditionError(
            f"Input must have zero mean: integral {integral:.3e} vs L1 {l1:.3e}",
            integral=integral,
        )


def decompose(f: GridFunction, pou: PartitionOfUnity, n_sub: Optional[int] = None) -> Decomposition:
    """Split zero-mean f into pieces supported in Omega_i with zero means."""
    n_sub = pou.n_sub if n_sub is None else n_sub
    if n_sub != pou.n_sub:
        raise DomainError(
            f"Partition built for n_sub={pou.n_sub}, asked for {n_sub}", parameter="n_sub"
        )
    grid = f.grid
    _check_zero_mean(f)

    columns = grid.column_index
    beyond = (columns > n_sub) & (f.values != 0.0)
    if np.any(beyond):
        mass = float(np.sum(np.abs(f.values[beyond]) * grid.areas[beyond]))
        raise TailMassError(
            f"f has mass {mass:.3e} beyond Omega_{n_sub - 1}; increase n_sub",
            mass=mass,
        )

    phi = pou.on_grid(grid)
    areas = grid.areas
    parts = [GridFunction(grid, f.values * phi[i]) for i in range(n_sub)]

    # S_i = int f sum_{k>=i} phi_k, one suffix pass over the per-piece integrals
    piece_mass = np.array([float(np.sum(p.values * areas)) for p in parts])
    suffix_mass = np.cumsum(piece_mass[::-1])[::-1]

    column_area = grid.column_areas()
    corrections: list[Optional[GridFunction]] = [None]
    for i in range(1, n_sub):
        values = np.zeros(grid.n_cells)
        if i < grid.n_columns and column_area[i] > 0.0:
            values[columns == i] = suffix_mass[i] / column_area[i]
        corrections.append(GridFunction(grid, values))
    corrections.append(None)

    pieces = []
    for i in range(n_sub):
        values = parts[i].values.copy()
        upper = corrections[i + 1]
        lower = corrections[i]
        if upper is not None:
            values = values + upper.values
        if lower is not None:
            values = values - lower.values
        pieces.append(GridFunction(grid, values))

    report = _report(f, pieces, corrections, n_sub)
    logger.debug(
        f"Decomposed f into {n_sub} pieces: reconstruction={report.reconstruction_error:.3e} "
        f"max_mean={report.max_mean:.3e}"
    )
    return Decomposition(
        f=f,
        pou=pou,
        pieces=pieces,
        parts=parts,
        corrections=corrections,
        suffix_mass=suffix_mass,
        report=report,
    )


def _report(
    f: GridFunction,
    pieces: list[GridFunction],
    corrections: list[Optional[GridFunction]],
    n_sub: int,
) -> DecompositionReport:
    grid = f.grid
    total = np.zeros_like(f.values)
    for piece in pieces:
        total = total + piece.values

    support_ok = True
    for i, piece in enumerate(pieces):
        outside = ~grid.subdomain_mask(i)
        support_ok = support_ok and bool(np.all(piece.values[outside] == 0.0))

    present = [c.values for c in corrections if c is not None]
    disjoint = all(
        bool(np.all(present[k] * present[k + 1] == 0.0)) for k in range(len(present) - 1)
    )

    return DecompositionReport(
        n_sub=n_sub,
        reconstruction_error=float(np.max(np.abs(total - f.values))) if total.size else 0.0,
        max_abs_f=f.max_abs(),
        l1_norm=f.l1_norm(),
        means=[piece.integral() for piece in pieces],
        support_ok=support_ok,
        corrections_disjoint=disjoint,
    )


# ----------------------------------------------------------------------
# Constants
# ----------------------------------------------------------------------


def _weighted_lq(values: np.ndarray, log_omega: np.ndarray, areas: np.ndarray, q: float) -> float:
    """sum |v|^q omega^{-q} area, evaluated in log space for the weight."""
    with np.errstate(divide="ignore"):
        log_terms = q * np.log(np.abs(values)) - q * log_omega + np.log(areas)
    return float(np.sum(np.exp(log_terms[values != 0.0])))


def decomposition_constant(
    f: GridFunction, dec: Decomposition, omega: WeightSpec, q: float
) -> float:
    """(sum_i int |g_i|^q omega^-q)^{1/q} / (int |f|^q omega^-q)^{1/q}."""
    conjugate_exponent(q)
    dec.f.grid.require_same(f.grid)
    cx, _ = f.grid.centroids
    log_omega = log_weight(omega, cx)
    areas = f.grid.areas

    denominator = _weighted_lq(f.values, log_omega, areas, q)
    if denominator == 0.0:
        raise DegenerateInputError("f vanishes identically; C_d is undefined")
    numerator = sum(_weighted_lq(g.values, log_omega, areas, q) for g in dec.pieces)
    return float((numerator / denominator) ** (1.0 / q))


def decomposition_bound(c_omega: float, c_h: float, q: float) -> float:
    """2^{2+1/q} C_omega^2 C_H."""
    return float(2.0 ** (2.0 + 1.0 / q) * c_omega**2 * c_h)


def correction_hardy_check(dec: Decomposition, omega: WeightSpec, q: float) -> dict[str, Any]:
    """
    Evaluate sum_i U_i (sum_{k>=i} b_k)^q against sum_k V_k b_k^q.

    b_k = int |f_k|, U_i = |B_i|^{1-q} omega(2^-i)^{-q}, V_k = |Omega_k|^{1-q} omega(2^-k)^{-q}
    for 1 <= i, k <= n_sub-1. The q-th root of the quotient must not exceed 4 A,
    with A the characterization constant of the reversed pair in exponent q.
    """
    conjugate_exponent(q)
    grid = dec.f.grid
    n = dec.n_sub - 1
    if n < 1:
        raise DomainError("Correction check needs n_sub >= 2", parameter="n_sub")
    if grid.n_columns < dec.n_sub:
        raise DomainError(
            f"Grid has {grid.n_columns} columns, correction check needs {dec.n_sub}",
            parameter="n_sub",
        )

    masses = np.array([p.l1_norm() for p in dec.parts[1 : n + 1]])
    idx = np.arange(1, n + 1)
    col_area = grid.column_areas()
    sub_area = np.array(
        [float(np.sum(grid.areas[grid.subdomain_mask(int(i))])) for i in idx]
    )
    log_omega = log_weight(omega, np.exp2(-idx.astype(float)))
    log_u = (1.0 - q) * np.log(col_area[idx]) - q * log_omega
    log_v = (1.0 - q) * np.log(sub_area) - q * log_omega

    suffix = np.cumsum(masses[::-1])[::-1]
    lhs = float(np.sum(np.exp(log_u) * suffix**q))
    rhs = float(np.sum(np.exp(log_v) * masses**q))

    u_rev = SequenceWeight.from_log_terms(log_u[::-1], label="U reversed")
    v_rev = SequenceWeight.from_log_terms(log_v[::-1], label="V reversed")
    a_value, _ = characterization_A(u_rev, v_rev, q, n)

    ratio = (lhs / rhs) ** (1.0 / q) if rhs > 0.0 else 0.0
    return {
        "lhs": lhs,
        "rhs": rhs,
        "ratio": ratio,
        "A": a_value,
        "bound": 4.0 * a_value,
        "masses": masses.tolist(),
    }
