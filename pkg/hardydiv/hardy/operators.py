"""Prefix (Hardy) and suffix (dual) summation operators."""

from typing import Optional

import numpy as np

from hardydiv.core.errors import DataError, DomainError
from hardydiv.domain.models import SequenceWeight
from hardydiv.hardy.characterization import conjugate_exponent


def _nonnegative(values: np.ndarray, name: str, n: Optional[int]) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1:
        raise DataError(f"{name} must be a 1-D sequence")
    if n is not None:
        if n < 1 or n > array.size:
            raise DomainError(f"Truncation {n} outside 1..{array.size}", parameter="N")
        array = array[:n]
    if np.any(np.isnan(array)) or np.any(array < 0.0):
        index = int(np.flatnonzero(~(array >= 0.0))[0]) + 1
        raise DataError(f"{name} term {index} is negative", details={"index": index})
    return array


def apply_hardy_operator(a: np.ndarray, n: Optional[int] = None) -> np.ndarray:
    """(Ta)_j = sum_{i<=j} a_i."""
    return np.cumsum(_nonnegative(a, "a", n))


def apply_dual_operator(b: np.ndarray, n: Optional[int] = None) -> np.ndarray:
    """(T*b)_i = sum_{j>=i} b_j, accumulated from the largest index."""
    values = _nonnegative(b, "b", n)
    return np.cumsum(values[::-1])[::-1]


def hardy_ratio(
    a: np.ndarray, u: SequenceWeight, v: SequenceWeight, p: float
) -> float:
    """
    (sum u_j (Ta)_j^p)^{1/p} / (sum v_j a_j^p)^{1/p} for one nonnegative sequence a.

    Evaluated in log space so that geometric weights do not underflow.
    """
    conjugate_exponent(p)
    values = _nonnegative(a, "a", None)
    if not np.any(values > 0.0):
        raise DataError("Trial sequence is identically zero")
    n = values.size
    log_u = u.log_terms(n)
    log_v = v.log_terms(n)
    with np.errstate(divide="ignore"):
        log_prefix = np.log(np.cumsum(values))
        log_a = np.log(values)
    numerator = np.logaddexp.reduce(log_u + p * log_prefix)
    denominator = np.logaddexp.reduce(log_v + p * log_a)
    return float(np.exp((numerator - denominator) / p))
