"""
Structured results for hardydiv runs.

Every report converts to a plain dict (JSON) and, for sweeps, to flat rows (CSV).
Reports carry no timestamps: identical inputs give identical bytes.
"""

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Optional

from hardydiv.domain.models import StarShapeCert, Verdict

CHECK_RTOL = 1e-9


class Status(str, Enum):
    """Outcome of one measured-versus-bound check."""
    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"


@dataclass
class HardyReport:
    """Characterization constant with the sandwich [A, 4A]."""
    A: float
    lower: float
    upper: float
    empirical_lower: float
    k_star: int
    n: int
    p: float
    A_2n: Optional[float] = None
    A_4n: Optional[float] = None
    growth: list[float] = field(default_factory=list)
    verdict: str = Verdict.UNDETERMINED.value

    @property
    def consistent(self) -> bool:
        return self.lower <= self.upper and self.empirical_lower <= self.upper

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["consistent"] = self.consistent
        return data


@dataclass
class AdmissibilityReport:
    """Sup/inf ratios of a weight over the strips, and integrability of omega^p."""
    weight: dict[str, Any]
    p: float
    gamma: float
    C_omega: float
    C_omega_sampled: float
    integrable: bool
    per_subdomain_ratios: list[float] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class LogWeightReport:
    """Finiteness of A for log-power weights with the limit diagnostics."""
    alpha: float
    gamma: float
    p: float
    n: int
    A_n: float
    A_2n: float
    A_4n: float
    contraction: float
    verdict: str
    r_tilde: float
    a_tilde: float
    quotient: float
    quotient_limit: float
    quotient_sum: float
    quotient_sum_limit: float
    tail_estimate_from: Optional[int] = None

    @property
    def quotient_error(self) -> float:
        return abs(self.quotient - self.quotient_limit) / self.quotient_limit

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["quotient_error"] = self.quotient_error
        return data


@dataclass
class StarShapeReport:
    """Sampling verification of a star-shape certificate."""
    cert: StarShapeCert
    n_samples: int
    seed: int
    segment_points: int
    violations: int = 0
    min_slope: Optional[float] = None
    critical_samples: int = 0
    distance_violations: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.distance_violations == 0

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["cert"] = self.cert.to_dict()
        data["passed"] = self.passed
        return data


@dataclass
class DecompositionReport:
    """Checks of the three decomposition properties."""
    n_sub: int
    reconstruction_error: float
    max_abs_f: float
    l1_norm: float
    means: list[float] = field(default_factory=list)
    support_ok: bool = True
    corrections_disjoint: bool = True

    @property
    def max_mean(self) -> float:
        return max((abs(m) for m in self.means), default=0.0)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["max_mean"] = self.max_mean
        return data


@dataclass
class DivSolveReport:
    """Residuals, energies and measured constants of a divergence solve."""
    div_residual_rel: float
    energy: float
    iterations: int = 0
    local_ratio: Optional[float] = None
    cd_bound: Optional[float] = None
    global_ratio: Optional[float] = None
    main_bound: Optional[float] = None
    subdomain: Optional[int] = None
    local_reports: list["DivSolveReport"] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        ok = True
        if self.local_ratio is not None and self.cd_bound is not None:
            ok = ok and self.local_ratio <= self.cd_bound
        if self.global_ratio is not None and self.main_bound is not None:
            ok = ok and self.global_ratio <= self.main_bound
        return ok and all(r.accepted for r in self.local_reports)

    def to_dict(self) -> dict[str, Any]:
        data = {k: v for k, v in asdict(self).items() if k != "local_reports"}
        data["local_reports"] = [r.to_dict() for r in self.local_reports]
        data["accepted"] = self.accepted
        return data


@dataclass
class Check:
    """
    One measured value next to its bound.

    Passes while measured <= bound (1 + rtol). A zero bound is strict.
    """
    name: str
    measured: float
    bound: float
    rtol: float = CHECK_RTOL

    @property
    def status(self) -> Status:
        limit = self.bound + self.rtol * abs(self.bound)
        return Status.FAIL if self.measured > limit else Status.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "status": self.status.value,
        }


@dataclass
class SweepRow:
    """One parameter value of a reproduction sweep."""
    parameter: str
    value: float
    checks: list[Check] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)
    error: Optional[dict[str, Any]] = None

    @property
    def status(self) -> Status:
        if self.error is not None:
            return Status.ERROR
        if any(c.status is Status.FAIL for c in self.checks):
            return Status.FAIL
        return Status.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "parameter": self.parameter,
            "value": self.value,
            "status": self.status.value,
            "values": self.values,
            "checks": [c.to_dict() for c in self.checks],
            "error": self.error,
        }

    def to_flat(self) -> dict[str, Any]:
        """Flat CSV row: parameter, status, values, then measured/bound per check."""
        flat: dict[str, Any] = {self.parameter: self.value, "status": self.status.value}
        flat.update(self.values)
        for check in self.checks:
            flat[f"{check.name}"] = check.measured
            flat[f"{check.name}_bound"] = check.bound
        if self.error is not None:
            flat["error"] = self.error.get("message", "")
        return flat


@dataclass
class SweepReport:
    """
    Ordered rows of a sweep plus run-level checks.

    Rows are ordered by parameter value regardless of completion order.
    """
    run_id: str
    title: str
    config: dict[str, Any]
    rows: list[SweepRow] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(r.status is Status.FAIL for r in self.rows) or any(
            c.status is Status.FAIL for c in self.checks
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "title": self.title,
            "config": self.config,
            "rows": [r.to_dict() for r in self.rows],
            "checks": [c.to_dict() for c in self.checks],
            "extra": self.extra,
            "failed": self.failed,
        }

    def to_markdown(self) -> str:
        """Convert report to markdown."""
        lines = [f"# {self.title}", "", f"Run: `{self.run_id}`", ""]
        for row in self.rows:
            lines.append(f"## {row.parameter} = {row.value:g} [{row.status.value}]")
            if row.error:
                lines.append(f"- error: {row.error.get('message', '')}")
            for check in row.checks:
                lines.append(
                    f"- {check.name}: {check.measured:.6g} <= {check.bound:.6g} "
                    f"({check.status.value})"
                )
            lines.append("")
        if self.checks:
            lines.append("## Run checks")
            for check in self.checks:
                lines.append(
                    f"- {check.name}: {check.measured:.6g} <= {check.bound:.6g} "
                    f"({check.status.value})"
                )
        return "\n".join(lines)
