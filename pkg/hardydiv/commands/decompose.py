"""Decomposition of a library test function with its measured constant."""

from typing import Optional

from hardydiv.commands.base import BaseCommand
from hardydiv.core.config import RunConfig
from hardydiv.decomposition.engine import (
    correction_hardy_check,
    decompose,
    decomposition_bound,
    decomposition_constant,
)
from hardydiv.decomposition.grid import CompositeGrid
from hardydiv.decomposition.library import LIBRARY_VERSION, library_function
from hardydiv.decomposition.partition import PartitionOfUnity
from hardydiv.domain.report import Check, SweepReport, SweepRow
from hardydiv.hardy.characterization import characterization_A
from hardydiv.services.persistence import ReportStore
from hardydiv.weights.catalog import admissibility, hardy_sequence

RECONSTRUCTION_TOL = 1e-12
MEAN_TOL = 1e-10


class DecomposeCommand(BaseCommand):
    """f = sum g_i for the configured test function and weight."""

    command_name = "decompose"
    title = "Zero-mean decomposition"

    def __init__(self, *args, store: Optional[ReportStore] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.store = store

    def run(self, run_config: RunConfig) -> SweepReport:
        omega = self.weight_from(run_config)
        gamma, q = run_config.gamma, run_config.p
        grid = CompositeGrid.for_subdomains(gamma, run_config.subdomains, run_config.resolution)
        report = self.new_report(
            run_config,
            weight=omega.to_dict(),
            grid=grid.to_dict(),
            library_version=LIBRARY_VERSION,
        )

        def build(row: SweepRow) -> None:
            f = library_function(run_config.test_function, grid, run_config.seed)
            pou = PartitionOfUnity(
                n_sub=run_config.subdomains, ramp=self.config_value("decomposition.ramp")
            )
            dec = decompose(f, pou)
            details = dec.report
            row.values.update(
                {
                    "reconstruction_error": details.reconstruction_error,
                    "max_mean": details.max_mean,
                    "support_ok": details.support_ok,
                }
            )
            row.checks.append(
                Check(
                    "reconstruction",
                    details.reconstruction_error,
                    RECONSTRUCTION_TOL * details.max_abs_f,
                )
            )
            row.checks.append(Check("mean", details.max_mean, MEAN_TOL * details.l1_norm))
            if not details.support_ok:
                row.checks.append(Check("support", 1.0, 0.0))

            c_omega = admissibility(omega, q, gamma).C_omega
            u = hardy_sequence(omega, gamma, q, run_config.n)
            a_value, _ = characterization_A(u, u, q, run_config.n)
            c_d = decomposition_constant(f, dec, omega, q)
            row.values["C_d"] = c_d
            row.checks.append(Check("C_d", c_d, decomposition_bound(c_omega, 4.0 * a_value, q)))

            correction = correction_hardy_check(dec, omega, q)
            row.values["correction_A"] = correction["A"]
            row.checks.append(Check("correction_hardy", correction["ratio"], correction["bound"]))

            if self.store is not None:
                self.store.save_grid_function(f, f"{run_config.run_id}_f")
                for i, piece in enumerate(dec.pieces):
                    self.store.save_grid_function(piece, f"{run_config.run_id}_g{i}")

        report.rows.append(self.safe_row("q", q, build))
        return report
