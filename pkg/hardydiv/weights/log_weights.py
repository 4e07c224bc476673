"""
Finiteness of the characterization constant for log-power weights.

For omega = (1 - ln x1)^alpha the Hardy sequence is
u_i = C_gamma 2^{-(gamma+1) i} (1 + i ln 2)^a with a = p alpha, and the head sums
of u^{1-q} grow like r~^N (1 + N ln 2)^{a~} with r~ = 2^{(gamma+1)(q-1)},
a~ = a (1 - q). The quotient of the head sum by that growth has two reference
limits: r~/(r~ - 1) for the sum itself and r~/ln r~ for its integral majorant.
"""

from typing import Optional

import numpy as np
from scipy import integrate

from hardydiv.core.config import config_value, load_yaml_config
from hardydiv.core.errors import DomainError
from hardydiv.core.logging import get_logger
from hardydiv.domain.models import Verdict
from hardydiv.domain.report import LogWeightReport
from hardydiv.hardy.characterization import characterization_A, conjugate_exponent
from hardydiv.weights.catalog import LN2, hardy_sequence, log_power_weight

logger = get_logger("weights.log_weights")

# integrand decays like r~^{-s}; beyond this many units it is below double precision
_INTEGRAL_CUTOFF = 80.0

# increments shrinking at least this fast under doubling mean a finite limit
_CONTRACTION = 0.75


def _log_growth(n: int, log_rt: float, a_tilde: float) -> float:
    return n * log_rt + a_tilde * np.log1p(n * LN2)


def head_sum_quotient(n: int, log_rt: float, a_tilde: float) -> float:
    """sum_{i<=N} r~^i (1+i ln2)^{a~} / (r~^N (1+N ln2)^{a~})."""
    idx = np.arange(1, n + 1, dtype=float)
    log_terms = idx * log_rt + a_tilde * np.log1p(idx * LN2)
    return float(np.exp(np.logaddexp.reduce(log_terms) - _log_growth(n, log_rt, a_tilde)))


def integral_quotient(n: int, log_rt: float, a_tilde: float) -> float:
    """
    int_1^{N+1} r~^x (1+x ln2)^{a~} dx / (r~^N (1+N ln2)^{a~}).

    Integrated in s = N + 1 - x so the integrand is O(1) at s = 0.
    """
    log_norm = np.log1p(n * LN2)

    def integrand(s: float) -> float:
        return float(
            np.exp((1.0 - s) * log_rt + a_tilde * (np.log1p((n + 1.0 - s) * LN2) - log_norm))
        )

    upper = min(float(n), _INTEGRAL_CUTOFF / log_rt)
    value, _ = integrate.quad(integrand, 0.0, upper, limit=200, epsabs=0.0, epsrel=1e-12)
    return float(value)


def tail_estimate_start(n: int, gamma: float, a: float) -> Optional[int]:
    """
    Smallest k0 such that sum_{i=k}^N r^i (1+i ln2)^a <= -2 r^k/(r ln r) (1+k ln2)^a
    for every k0 <= k <= N, with r = 2^{-(gamma+1)}.
    """
    log_r = -(gamma + 1.0) * LN2
    idx = np.arange(1, n + 1, dtype=float)
    log_terms = idx * log_r + a * np.log1p(idx * LN2)
    log_tail = np.logaddexp.accumulate(log_terms[::-1])[::-1]
    log_bound = np.log(2.0) + idx * log_r - np.log(-log_r) - log_r + a * np.log1p(idx * LN2)
    failures = np.flatnonzero(log_tail > log_bound)
    if failures.size == 0:
        return 1
    last = int(failures[-1]) + 1
    return last + 1 if last < n else None


def log_weight_A(
    alpha: float,
    gamma: float,
    p: float,
    n: int,
    *,
    stabilization: Optional[float] = None,
) -> LogWeightReport:
    """
    A_N for the log-power Hardy sequence with finiteness verdict and quotient diagnostics.

    Finite when |A_2N - A_N| <= stabilization * A_N, or when the doubling
    increments contract (|A_4N - A_2N| <= 0.75 |A_2N - A_N|), which is how a
    supremum approached at rate 1/N shows up at moderate N.
    """
    if n < 2:
        raise DomainError(f"Truncation must be >= 2, got {n}", parameter="N")
    if stabilization is None:
        stabilization = config_value(load_yaml_config(), "weights.log_stabilization")
    q = conjugate_exponent(p)

    sequence = hardy_sequence(log_power_weight(alpha), gamma, p, 4 * n)
    a_n, _ = characterization_A(sequence, sequence, p, n)
    a_2n, _ = characterization_A(sequence, sequence, p, 2 * n)
    a_4n, _ = characterization_A(sequence, sequence, p, 4 * n)
    first, second = abs(a_2n - a_n), abs(a_4n - a_2n)
    contraction = second / first if first > 0.0 else 0.0
    finite = bool(np.isfinite(a_4n)) and (
        first <= stabilization * a_n or contraction <= _CONTRACTION
    )
    verdict = Verdict.FINITE if finite else Verdict.DIVERGENT

    a = p * alpha
    a_tilde = a * (1.0 - q)
    log_rt = (gamma + 1.0) * (q - 1.0) * LN2
    r_tilde = float(np.exp(log_rt))

    report = LogWeightReport(
        alpha=alpha,
        gamma=gamma,
        p=p,
        n=n,
        A_n=a_n,
        A_2n=a_2n,
        A_4n=a_4n,
        contraction=contraction,
        verdict=verdict.value,
        r_tilde=r_tilde,
        a_tilde=a_tilde,
        quotient=integral_quotient(n, log_rt, a_tilde),
        quotient_limit=r_tilde / log_rt,
        quotient_sum=head_sum_quotient(n, log_rt, a_tilde),
        quotient_sum_limit=r_tilde / (r_tilde - 1.0),
        tail_estimate_from=tail_estimate_start(n, gamma, a),
    )
    logger.debug(
        f"Log weight alpha={alpha} gamma={gamma}: A_N={a_n:.8g} A_2N={a_2n:.8g} "
        f"verdict={report.verdict} quotient={report.quotient:.6g}"
    )
    return report
