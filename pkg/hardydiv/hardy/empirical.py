"""
Empirical lower bounds for the best Hardy constant.

Any feasible nonnegative sequence a gives a certified lower bound
(sum u (Ta)^p)^{1/p} / (sum v a^p)^{1/p}. The search runs on x = v^{1/p} a, so
the operator becomes x -> u^{1/p} T (v^{-1/p} x) and only the ratios
(u_i / v_j)^{1/p}, j <= i, appear. Prefix and suffix sums are accumulated in
log space, which keeps weights of any dynamic range out of linear space.

For p = 2 the maximum is the largest singular value and power iteration on
M^T M is used; otherwise projected gradient ascent on the log ratio with
Armijo backtracking.
"""

from typing import Optional

import numpy as np
from scipy.special import logsumexp

from hardydiv.core.config import config_value, load_yaml_config
from hardydiv.core.errors import DomainError
from hardydiv.core.logging import get_logger
from hardydiv.domain.models import SequenceWeight
from hardydiv.hardy.characterization import conjugate_exponent

logger = get_logger("hardy.empirical")

_ARMIJO = 1e-4
_MAX_HALVINGS = 40


def _log(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(x)


def _log_prefix(log_terms: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        return np.logaddexp.accumulate(log_terms)


def _log_suffix(log_terms: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        return np.logaddexp.accumulate(log_terms[::-1])[::-1]


def _start_point(log_v: np.ndarray, p: float, shift: float) -> np.ndarray:
    """x = v^{1/p} a for a_k = k^{-1/p - shift}, normalized to sum x^p = 1."""
    k = np.arange(1, log_v.size + 1, dtype=float)
    log_x = log_v / p - (1.0 / p + shift) * np.log(k)
    log_x -= logsumexp(p * log_x) / p
    return np.exp(log_x)


def _power_iteration_p2(
    log_u: np.ndarray,
    log_v: np.ndarray,
    x: np.ndarray,
    budget: int,
    rtol: float,
) -> float:
    half_u = 0.5 * log_u
    half_v = 0.5 * log_v

    def matvec(z: np.ndarray) -> np.ndarray:
        return np.exp(half_u + _log_prefix(_log(z) - half_v))

    def rmatvec(y: np.ndarray) -> np.ndarray:
        return np.exp(_log_suffix(_log(y) + half_u) - half_v)

    x = x / np.linalg.norm(x)
    mx = matvec(x)
    best = float(np.linalg.norm(mx))
    for iteration in range(budget):
        y = rmatvec(mx)
        norm_y = np.linalg.norm(y)
        if norm_y == 0.0 or not np.isfinite(norm_y):
            break
        x = y / norm_y
        mx = matvec(x)
        value = float(np.linalg.norm(mx))
        converged = abs(value - best) <= rtol * value
        best = max(best, value)
        if converged:
            logger.debug(f"Power iteration converged after {iteration + 1} steps")
            break
    return best


def _log_ratio(x: np.ndarray, log_u: np.ndarray, log_v: np.ndarray, p: float) -> tuple[float, np.ndarray]:
    """ln of the ratio and the log prefix sums ln (T v^{-1/p} x)_i."""
    log_prefix = _log_prefix(_log(x) - log_v / p)
    log_num = float(logsumexp(log_u + p * log_prefix))
    log_den = float(logsumexp(p * _log(x)))
    return (log_num - log_den) / p, log_prefix


def _gradient_ascent(
    log_u: np.ndarray,
    log_v: np.ndarray,
    x: np.ndarray,
    p: float,
    budget: int,
    rtol: float,
) -> float:
    current, log_prefix = _log_ratio(x, log_u, log_v, p)
    best = current
    for iteration in range(budget):
        log_num = float(logsumexp(log_u + p * log_prefix))
        den = float(np.sum(x**p))
        # d/dx of (1/p) ln sum u (T v^{-1/p} x)^p - (1/p) ln sum x^p
        grad = (
            np.exp(_log_suffix(log_u + (p - 1.0) * log_prefix) - log_v / p - log_num)
            - x ** (p - 1.0) / den
        )
        grad_norm_sq = float(np.dot(grad, grad))
        if grad_norm_sq == 0.0 or not np.isfinite(grad_norm_sq):
            break
        step = 1.0 / np.sqrt(grad_norm_sq)
        accepted = False
        for _ in range(_MAX_HALVINGS):
            trial = np.maximum(x + step * grad, 0.0)
            if np.any(trial > 0.0):
                value, trial_prefix = _log_ratio(trial, log_u, log_v, p)
                if value >= current + _ARMIJO * float(np.dot(grad, trial - x)):
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            break
        scale = np.sum(trial**p) ** (1.0 / p)
        x = trial / scale
        log_prefix = trial_prefix - np.log(scale)
        gain = value - current
        current = value
        best = max(best, current)
        if gain <= rtol:
            logger.debug(f"Gradient ascent stalled after {iteration + 1} steps")
            break
    return float(np.exp(best))


def empirical_best_constant(
    u: SequenceWeight,
    v: SequenceWeight,
    p: float,
    n: Optional[int] = None,
    budget: Optional[int] = None,
    *,
    start_shift: Optional[float] = None,
    rtol: float = 1e-13,
) -> float:
    """
    Certified lower bound for the norm of the prefix operator l^p(v) -> l^p(u).

    `budget` counts iterations; budget = 0 returns the ratio of the start
    sequence a_k = k^{-1/p - start_shift}.
    """
    config = load_yaml_config()
    n = u.truncation if n is None else n
    if n < 1:
        raise DomainError(f"Truncation must be >= 1, got {n}", parameter="N")
    budget = config_value(config, "hardy.empirical_budget") if budget is None else budget
    if budget < 0:
        raise DomainError(f"Budget must be >= 0, got {budget}", parameter="budget")
    shift = (
        config_value(config, "hardy.empirical_start_shift") if start_shift is None else start_shift
    )
    conjugate_exponent(p)

    log_u = u.log_terms(n)
    log_v = v.log_terms(n)
    x0 = _start_point(log_v, p, shift)
    if p == 2.0:
        result = _power_iteration_p2(log_u, log_v, x0, budget, rtol)
    else:
        result = _gradient_ascent(log_u, log_v, x0, p, budget, rtol)
    logger.debug(f"Empirical constant p={p} N={n} budget={budget}: {result:.10g}")
    return result


def empirical_operator_norm(
    u: SequenceWeight,
    v: SequenceWeight,
    p: float,
    n: Optional[int] = None,
    budget: int = 500,
    *,
    dual: bool = False,
) -> float:
    """
    Norm estimate of the prefix operator, or of the suffix operator between
    l^q(u^{1-q}) and l^q(v^{1-q}) when `dual` is set.

    The suffix form is rewritten as a prefix form by index reversal, which is
    exactly the pair returned by `dual_weights`.
    """
    from hardydiv.hardy.duality import dual_weights

    n = u.truncation if n is None else n
    if not dual:
        return empirical_best_constant(u, v, p, n, budget)
    u_dual, v_dual = dual_weights(u, v, p, n)
    return empirical_best_constant(u_dual, v_dual, conjugate_exponent(p), n, budget)
