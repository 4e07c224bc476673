"""Characterization constant and sandwich for the Hardy sequence of a weight."""

from hardydiv.commands.base import BaseCommand
from hardydiv.core.config import RunConfig
from hardydiv.domain.models import Verdict, WeightKind
from hardydiv.domain.report import Check, SweepReport, SweepRow
from hardydiv.hardy.characterization import hardy_bounds
from hardydiv.weights.catalog import hardy_sequence, power_CH_bound


class HardyCommand(BaseCommand):
    """A_N, 4 A_N and the empirical lower bound for u_i = |Omega_i| omega(2^-i)^p."""

    command_name = "hardy"
    title = "Weighted discrete Hardy inequality"

    def run(self, run_config: RunConfig) -> SweepReport:
        omega = self.weight_from(run_config)
        gamma, p = run_config.gamma, run_config.p
        report = self.new_report(run_config, weight=omega.to_dict())

        def build(row: SweepRow) -> None:
            n = int(row.value)
            u = hardy_sequence(omega, gamma, p, 4 * n)
            hardy = hardy_bounds(u, u, p, n)
            row.values.update(
                {
                    "A_N": hardy.A,
                    "k_star": hardy.k_star,
                    "verdict": hardy.verdict,
                    "growth": hardy.growth,
                }
            )
            row.checks.append(Check("A_N", hardy.lower, hardy.upper))
            row.checks.append(Check("empirical", hardy.empirical_lower, hardy.upper))
            if hardy.verdict == Verdict.DIVERGENT.value:
                row.checks.append(Check("finite", 1.0, 0.0))
            if omega.kind is WeightKind.POWER:
                row.checks.append(
                    Check("4A_N", hardy.upper, power_CH_bound(omega.beta, gamma, p))  # type: ignore[arg-type]
                )

        report.rows.append(self.safe_row("N", run_config.n, build))
        return report
