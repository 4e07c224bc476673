"""Weighted discrete Hardy inequalities: characterization, operators, duality."""

from hardydiv.hardy.characterization import (
    characterization_A,
    closed_form_geometric_bound,
    conjugate_exponent,
    hardy_bounds,
    log_characterization_profile,
)
from hardydiv.hardy.duality import dual_weights
from hardydiv.hardy.empirical import empirical_best_constant, empirical_operator_norm
from hardydiv.hardy.operators import apply_dual_operator, apply_hardy_operator, hardy_ratio

__all__ = [
    "apply_dual_operator",
    "apply_hardy_operator",
    "characterization_A",
    "closed_form_geometric_bound",
    "conjugate_exponent",
    "dual_weights",
    "empirical_best_constant",
    "empirical_operator_norm",
    "hardy_bounds",
    "hardy_ratio",
    "log_characterization_profile",
]
