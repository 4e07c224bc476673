"""Measures and star-shape certificates of the cusp strips."""

from hardydiv.commands.base import BaseCommand
from hardydiv.core.config import RunConfig
from hardydiv.domain.report import Check, SweepReport, SweepRow
from hardydiv.geometry.cusp import CuspDomain

MEASURE_TOL = 1e-12


class GeometryCommand(BaseCommand):
    """One row per strip Omega_i, i = 0..subdomains-1."""

    command_name = "geometry"
    title = "Cusp partition geometry"

    def run(self, run_config: RunConfig) -> SweepReport:
        domain = CuspDomain(run_config.gamma)
        samples = self.config_value("geometry.samples")
        expected_ratio = 1.0 + 2.0 ** (-(domain.gamma + 1.0))
        report = self.new_report(run_config, samples=samples)

        def build(row: SweepRow) -> None:
            i = int(row.value)
            verification = domain.verify_star_shaped(i, samples, run_config.seed + i)
            cert = verification.cert
            row.values.update(
                {
                    "measure": domain.subdomain_measure(i),
                    "R": cert.R,
                    "r": cert.r,
                    "cd_bound": cert.cd_bound,
                    "min_slope": verification.min_slope,
                }
            )
            row.checks.append(Check("violations", float(verification.violations), 0.0))
            row.checks.append(
                Check("distance_violations", float(verification.distance_violations), 0.0)
            )
            if i >= 1:
                ratio = domain.subdomain_measure(i) / domain.overlap_measure(i)
                row.values["overlap_measure"] = domain.overlap_measure(i)
                row.values["measure_ratio"] = ratio
                row.checks.append(
                    Check("measure_ratio_error", abs(ratio - expected_ratio), MEASURE_TOL)
                )

        report.rows.extend(self.sweep("i", range(run_config.subdomains), build))
        return report
