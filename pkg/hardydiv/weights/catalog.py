"""
Weight families omega(x1), admissibility, and the induced Hardy sequences.

Power:     omega(x1) = x1^beta
LogPower:  omega(x1) = (1 - ln x1)^alpha
Tabulated: samples over (0, 1], linear in ln x1 between samples, log-log
           power-law fit below the first sample, constant above the last.
"""

from typing import Any, Iterable, Optional

import numpy as np

from hardydiv.core.config import config_value, load_yaml_config
from hardydiv.core.errors import DataError, DomainError, InadmissibleParameterError
from hardydiv.core.logging import get_logger
from hardydiv.domain.models import SequenceWeight, WeightKind, WeightSpec
from hardydiv.domain.report import AdmissibilityReport
from hardydiv.geometry.cusp import CuspDomain
from hardydiv.hardy.characterization import conjugate_exponent

logger = get_logger("weights.catalog")

LN2 = float(np.log(2.0))


# ======================================================================
# Constructors
# ======================================================================


def power_weight(beta: float) -> WeightSpec:
    if not np.isfinite(beta):
        raise DomainError(f"beta must be finite, got {beta}", parameter="beta")
    return WeightSpec(kind=WeightKind.POWER, beta=float(beta))


def log_power_weight(alpha: float) -> WeightSpec:
    if not np.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha}", parameter="alpha")
    return WeightSpec(kind=WeightKind.LOG_POWER, alpha=float(alpha))


def tabulated_weight(x1: Any, omega: Any, label: str = "") -> WeightSpec:
    """Tabulated weight; x1 strictly increasing in (0, 1], omega > 0."""
    xs = np.asarray(x1, dtype=float)
    ws = np.asarray(omega, dtype=float)
    if xs.ndim != 1 or xs.shape != ws.shape or xs.size < 2:
        raise DataError("Tabulated weight needs two equal-length columns with >= 2 samples")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ws))):
        raise DataError("Tabulated weight contains non-finite samples")
    if np.any(ws <= 0.0):
        index = int(np.flatnonzero(ws <= 0.0)[0])
        raise DataError(
            f"Tabulated weight sample {index} is not positive",
            details={"index": index, "x1": float(xs[index]), "omega": float(ws[index])},
        )
    if xs[0] <= 0.0 or xs[-1] > 1.0 or np.any(np.diff(xs) <= 0.0):
        raise DataError("Tabulated x1 must be strictly increasing in (0, 1]")
    return WeightSpec(kind=WeightKind.TABULATED, table_x=xs, table_w=ws, label=label)


# ======================================================================
# Evaluation
# ======================================================================


def _tail_fit(spec: WeightSpec, points: Optional[int] = None) -> tuple[float, float]:
    """(slope, intercept) of ln omega against ln x1 over the first samples."""
    if points is None:
        points = config_value(load_yaml_config(), "weights.tail_fit_points")
    k = max(2, min(points, len(spec.table_x)))  # type: ignore[arg-type]
    slope, intercept = np.polyfit(np.log(spec.table_x[:k]), np.log(spec.table_w[:k]), 1)  # type: ignore[index]
    return float(slope), float(intercept)


def log_weight(spec: WeightSpec, x1: Any) -> np.ndarray:
    """ln omega(x1) for x1 in (0, 1]."""
    x = np.asarray(x1, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("Weights are evaluated on 0 < x1 <= 1", parameter="x1")
    log_x = np.log(x)
    if spec.kind is WeightKind.POWER:
        return spec.beta * log_x  # type: ignore[operator]
    if spec.kind is WeightKind.LOG_POWER:
        return spec.alpha * np.log1p(-log_x)  # type: ignore[operator]

    xs, ws = spec.table_x, spec.table_w
    log_xs = np.log(xs)  # type: ignore[arg-type]
    values = np.log(np.interp(log_x, log_xs, ws))
    below = x < xs[0]  # type: ignore[index]
    if np.any(below):
        slope, intercept = _tail_fit(spec)
        values = np.where(below, intercept + slope * log_x, values)
    return values


def evaluate_weight(spec: WeightSpec, x1: Any) -> np.ndarray:
    """omega(x1)."""
    return np.exp(log_weight(spec, x1))


def tail_exponent(spec: WeightSpec) -> float:
    """Exponent s with omega(x1) ~ x1^s as x1 -> 0 (0 for log-power weights)."""
    if spec.kind is WeightKind.POWER:
        return float(spec.beta)  # type: ignore[arg-type]
    if spec.kind is WeightKind.LOG_POWER:
        return 0.0
    return _tail_fit(spec)[0]


# ======================================================================
# Admissibility
# ======================================================================


def closed_form_C_omega(spec: WeightSpec) -> Optional[float]:
    """Limit of the strip sup/inf ratio for the analytic families."""
    if spec.kind is WeightKind.POWER:
        return float(2.0 ** (2.0 * abs(spec.beta)))  # type: ignore[arg-type]
    if spec.kind is WeightKind.LOG_POWER:
        return float((1.0 + 2.0 * LN2) ** abs(spec.alpha))  # type: ignore[arg-type]
    return None


def strip_ratio(spec: WeightSpec, i: int) -> float:
    """sup/inf of omega over the x1-range of Omega_i."""
    lo, hi = 2.0 ** (-(i + 2)), 2.0 ** (-i)
    points = [lo, hi]
    if spec.kind is WeightKind.TABULATED:
        xs = spec.table_x
        points.extend(xs[(xs > lo) & (xs < hi)].tolist())  # type: ignore[index, operator]
    logs = log_weight(spec, np.asarray(points))
    return float(np.exp(np.max(logs) - np.min(logs)))


def _integrable(spec: WeightSpec, p: float, gamma: float) -> bool:
    if spec.kind is WeightKind.LOG_POWER:
        return True
    # omega^p x1^gamma near 0 behaves like x1^{s p + gamma}
    exponent = tail_exponent(spec) * p + gamma
    return bool(exponent > -1.0)


def admissibility(
    spec: WeightSpec, p: float, gamma: float, i_max: Optional[int] = None
) -> AdmissibilityReport:
    """
    C_omega and integrability of omega^p over the cusp.

    C_omega is the larger of the sampled strip ratios (i <= i_max) and the
    closed-form limit of the family.
    """
    conjugate_exponent(p)
    CuspDomain(gamma)
    if i_max is None:
        i_max = config_value(load_yaml_config(), "weights.i_max")
    if i_max < 1:
        raise DomainError(f"i_max must be >= 1, got {i_max}", parameter="i_max")

    ratios = [strip_ratio(spec, i) for i in range(i_max + 1)]
    sampled = max(ratios)
    closed = closed_form_C_omega(spec)
    notes: list[str] = []
    if closed is None:
        tail = tail_exponent(spec)
        closed = float(2.0 ** (2.0 * abs(tail)))
        notes.append(f"tabulated tail fitted as x1^{tail:.6g}")
    c_omega = max(sampled, closed)

    if spec.kind is WeightKind.POWER:
        beta0 = -(gamma + 1.0) / p
        stated = 2.0 ** (2.0 * abs(beta0))
        if c_omega > stated * (1.0 + 1e-12):
            notes.append(
                f"exact strip ratio 2^(2|beta|) = {c_omega:.6g} exceeds "
                f"2^(2|beta0|) = {stated:.6g} with beta0 = -(gamma+1)/p"
            )

    report = AdmissibilityReport(
        weight=spec.to_dict(),
        p=p,
        gamma=gamma,
        C_omega=c_omega,
        C_omega_sampled=sampled,
        integrable=_integrable(spec, p, gamma),
        per_subdomain_ratios=ratios,
        notes=notes,
    )
    logger.debug(
        f"Admissibility {spec.describe()}: C_omega={c_omega:.6g} integrable={report.integrable}"
    )
    return report


# ======================================================================
# Hardy sequences
# ======================================================================


def hardy_sequence(
    spec: WeightSpec, gamma: float, p: float, n: int
) -> SequenceWeight:
    """u_i = |Omega_i| omega(2^{-i})^p for i = 1..N, generated in log space."""
    conjugate_exponent(p)
    domain = CuspDomain(gamma)
    log_c = float(np.log(domain.measure_constant))
    g1 = gamma + 1.0

    if spec.kind is WeightKind.POWER:
        log_r = -(p * spec.beta + g1) * LN2  # type: ignore[operator]
        return SequenceWeight.from_log_geometric(
            log_c, log_r, n, label=f"|Omega_i| {spec.describe()}^p"
        )

    if spec.kind is WeightKind.LOG_POWER:
        a = p * spec.alpha  # type: ignore[operator]

        def generator(idx: np.ndarray) -> np.ndarray:
            return log_c - g1 * idx * LN2 + a * np.log1p(idx * LN2)

    else:

        def generator(idx: np.ndarray) -> np.ndarray:
            return log_c - g1 * idx * LN2 + p * log_weight(spec, np.exp2(-idx))

    return SequenceWeight.from_log_generator(
        generator, n, label=f"|Omega_i| {spec.describe()}^p"
    )


def power_ratio(beta: float, gamma: float, p: float) -> float:
    """r = 2^{-p beta - gamma - 1}."""
    return float(2.0 ** (-p * beta - gamma - 1.0))


def power_CH_bound(beta: float, gamma: float, p: float) -> float:
    """
    Closed-form upper bound 4 (1/(1-r))^{1/p} (1/(1-r^{q-1}))^{1/q}.

    Raises InadmissibleParameterError unless r = 2^{-p beta - gamma - 1} < 1.
    """
    q = conjugate_exponent(p)
    CuspDomain(gamma)
    t = (p * beta + gamma + 1.0) * LN2
    if not t > 0.0:
        raise InadmissibleParameterError(
            f"beta={beta} <= -(gamma+1)/p gives r >= 1",
            ratio=power_ratio(beta, gamma, p),
            parameter="beta",
        )
    one_minus_r = -np.expm1(-t)
    one_minus_rq = -np.expm1(-(q - 1.0) * t)
    return float(4.0 * one_minus_r ** (-1.0 / p) * one_minus_rq ** (-1.0 / q))


def blowup_profile(
    gamma: float, p: float, j_values: Iterable[int]
) -> dict[str, Any]:
    """
    bound(beta_j) (1 - r_j) for beta_j = -(gamma+1)/p + 2^{-j}.

    The factor max/min over j measures how well (1 - r)^{-1} captures the blow-up.
    """
    rows = []
    for j in j_values:
        beta = -(gamma + 1.0) / p + 2.0 ** (-j)
        bound = power_CH_bound(beta, gamma, p)
        one_minus_r = -np.expm1(-(p * beta + gamma + 1.0) * LN2)
        rows.append({"j": int(j), "beta": beta, "bound": bound, "scaled": bound * one_minus_r})
    scaled = [row["scaled"] for row in rows]
    factor = max(scaled) / min(scaled) if scaled else 1.0
    return {"rows": rows, "factor": float(factor)}
