"""Weight families, admissibility, induced Hardy sequences and closed forms."""

from hardydiv.weights.catalog import (
    admissibility,
    blowup_profile,
    closed_form_C_omega,
    evaluate_weight,
    hardy_sequence,
    log_power_weight,
    log_weight,
    power_CH_bound,
    power_ratio,
    power_weight,
    strip_ratio,
    tabulated_weight,
)
from hardydiv.weights.counterexample import counterexample_density, counterexample_integrals
from hardydiv.weights.log_weights import log_weight_A
from hardydiv.weights.tabulated import load_weight_csv, save_weight_csv

__all__ = [
    "admissibility",
    "blowup_profile",
    "closed_form_C_omega",
    "counterexample_density",
    "counterexample_integrals",
    "evaluate_weight",
    "hardy_sequence",
    "load_weight_csv",
    "log_power_weight",
    "log_weight",
    "log_weight_A",
    "power_CH_bound",
    "power_ratio",
    "power_weight",
    "save_weight_csv",
    "strip_ratio",
    "tabulated_weight",
]
