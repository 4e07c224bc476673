"""
Dual form of the weighted Hardy inequality.

The suffix-sum inequality

    sum_i v_i^{1-q} (sum_{j>=i} b_j)^q <= C sum_j u_j^{1-q} b_j^q

becomes a prefix-sum inequality with exponent q after the index reversal
m = N + 1 - i. Its characterization constant coincides with the primal one.
"""

from typing import Optional

from hardydiv.domain.models import SequenceWeight
from hardydiv.hardy.characterization import conjugate_exponent


def dual_weights(
    u: SequenceWeight,
    v: Optional[SequenceWeight] = None,
    p: float = 2.0,
    n: Optional[int] = None,
) -> tuple[SequenceWeight, SequenceWeight]:
    """
    Weight pair (u', v') of the dual inequality in prefix form, exponent q.

    u'_m = v_{N+1-m}^{1-q}, v'_m = u_{N+1-m}^{1-q}. With v omitted the primal
    inequality uses the same weights on both sides.
    """
    v = u if v is None else v
    n = u.truncation if n is None else n
    q = conjugate_exponent(p)
    log_u = u.log_terms(n)
    log_v = v.log_terms(n)
    u_dual = SequenceWeight.from_log_terms((1.0 - q) * log_v[::-1], label=f"dual({v.label})")
    v_dual = SequenceWeight.from_log_terms((1.0 - q) * log_u[::-1], label=f"dual({u.label})")
    return u_dual, v_dual
