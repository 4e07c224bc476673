"""Divergence equation solver on the cusp: staggered layout, local and global solves."""

from hardydiv.solver.global_solve import (
    GlobalSolution,
    assemble,
    global_solve,
    hardy_constant_upper,
    main_bound,
    verify_assembly,
)
from hardydiv.solver.local import local_solve, patch_operator, relative_divergence_residual, schur_pcg
from hardydiv.solver.norms import (
    weighted_gradient_energy,
    weighted_l2_squared,
    weighted_norms,
)
from hardydiv.solver.staggered import StaggeredField, StaggeredLayout, get_layout

__all__ = [
    "GlobalSolution",
    "StaggeredField",
    "StaggeredLayout",
    "assemble",
    "get_layout",
    "global_solve",
    "hardy_constant_upper",
    "local_solve",
    "main_bound",
    "patch_operator",
    "relative_divergence_residual",
    "schur_pcg",
    "verify_assembly",
    "weighted_gradient_energy",
    "weighted_l2_squared",
    "weighted_norms",
]
