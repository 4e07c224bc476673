"""Admissibility, closed forms and log-weight finiteness for one weight."""

import numpy as np

from hardydiv.commands.base import BaseCommand
from hardydiv.core.config import RunConfig
from hardydiv.domain.models import Verdict, WeightKind
from hardydiv.domain.report import Check, SweepReport, SweepRow
from hardydiv.weights.catalog import admissibility, closed_form_C_omega, power_CH_bound
from hardydiv.weights.counterexample import counterexample_integrals
from hardydiv.weights.log_weights import log_weight_A

# truncation levels compared by the counterexample row
COUNTEREXAMPLE_EPSILONS = (1e-6, 1e-12)
QUOTIENT_TOL = 0.01


def counterexample_growth(gamma: float) -> dict[str, float]:
    """L1 mass growth between the two truncations against ln((1+12 ln10)/(1+6 ln10))."""
    coarse, fine = (counterexample_integrals(gamma, eps) for eps in COUNTEREXAMPLE_EPSILONS)
    ln10 = np.log(10.0)
    expected = float(np.log((1.0 + 12.0 * ln10) / (1.0 + 6.0 * ln10)))
    growth = fine[0] - coarse[0]
    return {
        "l1_growth": growth,
        "l1_growth_expected": expected,
        "weighted_l2_coarse": coarse[1],
        "weighted_l2_fine": fine[1],
        "error": abs(growth - expected),
    }


class WeightsCommand(BaseCommand):
    """Weight catalog report: C_omega, integrability, closed-form constants."""

    command_name = "weights"
    title = "Weight admissibility"

    def run(self, run_config: RunConfig) -> SweepReport:
        omega = self.weight_from(run_config)
        gamma, p = run_config.gamma, run_config.p
        report = self.new_report(run_config, weight=omega.to_dict())

        def build(row: SweepRow) -> None:
            adm = admissibility(omega, p, gamma)
            row.values.update(
                {
                    "C_omega": adm.C_omega,
                    "C_omega_sampled": adm.C_omega_sampled,
                    "integrable": adm.integrable,
                    "notes": adm.notes,
                }
            )
            row.checks.append(Check("C_omega_sampled", adm.C_omega_sampled, adm.C_omega))
            if not adm.integrable:
                row.checks.append(Check("integrable", 1.0, 0.0))
            closed = closed_form_C_omega(omega)
            if closed is not None:
                row.values["C_omega_closed"] = closed

            if omega.kind is WeightKind.POWER:
                row.values["C_H_bound"] = power_CH_bound(omega.beta, gamma, p)  # type: ignore[arg-type]
            elif omega.kind is WeightKind.LOG_POWER:
                log_report = log_weight_A(omega.alpha, gamma, p, run_config.n)  # type: ignore[arg-type]
                row.values.update(
                    {
                        "A_N": log_report.A_n,
                        "verdict": log_report.verdict,
                        "quotient": log_report.quotient,
                        "quotient_limit": log_report.quotient_limit,
                        "tail_estimate_from": log_report.tail_estimate_from,
                    }
                )
                finite = log_report.verdict == Verdict.FINITE.value
                row.checks.append(Check("finite", 0.0 if finite else 1.0, 0.0))
                row.checks.append(Check("quotient_error", log_report.quotient_error, QUOTIENT_TOL))

        report.rows.append(self.safe_row("p", p, build))

        growth = counterexample_growth(gamma)
        report.extra["counterexample"] = growth
        report.checks.append(Check("counterexample_l1_growth", growth["error"], 1e-9))
        report.checks.append(
            Check("counterexample_weighted_l2", growth["weighted_l2_fine"], 1.0)
        )
        return report
