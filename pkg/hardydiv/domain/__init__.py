"""Domain models and reports."""

from hardydiv.domain.models import (
    Exponents,
    SequenceWeight,
    StarShapeCert,
    Verdict,
    WeightKind,
    WeightSpec,
)
from hardydiv.domain.report import (
    AdmissibilityReport,
    Check,
    DecompositionReport,
    DivSolveReport,
    HardyReport,
    LogWeightReport,
    StarShapeReport,
    Status,
    SweepReport,
    SweepRow,
)

__all__ = [
    "AdmissibilityReport",
    "Check",
    "DecompositionReport",
    "DivSolveReport",
    "Exponents",
    "HardyReport",
    "LogWeightReport",
    "SequenceWeight",
    "StarShapeCert",
    "StarShapeReport",
    "Status",
    "SweepReport",
    "SweepRow",
    "Verdict",
    "WeightKind",
    "WeightSpec",
]
