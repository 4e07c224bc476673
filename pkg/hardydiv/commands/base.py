"""
Base command class for all hardydiv commands.

All commands must:
- Inherit from BaseCommand
- Implement run(run_config) returning a SweepReport
- Record per-row failures as error rows, not raise them
"""

from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Optional

from hardydiv.core.config import RunConfig, Settings, config_value, get_settings, load_yaml_config
from hardydiv.core.errors import HardyDivError
from hardydiv.core.logging import LoggerMixin
from hardydiv.domain.models import WeightSpec
from hardydiv.domain.report import Status, SweepReport, SweepRow
from hardydiv.weights.catalog import log_power_weight, power_weight
from hardydiv.weights.tabulated import load_weight_csv

RowBuilder = Callable[[SweepRow], None]


class BaseCommand(ABC, LoggerMixin):
    """
    Abstract base class for CLI commands.

    Each command:
    - Has a unique name
    - Receives a validated RunConfig
    - Returns a SweepReport with ordered rows
    - Turns row failures into ERROR rows
    """

    command_name: str = "base"
    title: str = "hardydiv run"

    def __init__(
        self,
        settings: Optional[Settings] = None,
        config: Optional[dict] = None,
    ):
        self.settings = settings or get_settings()
        self.config = config or load_yaml_config()

    @abstractmethod
    def run(self, run_config: RunConfig) -> SweepReport:
        """
        Execute the command.

        Contract:
        - MUST return a SweepReport
        - MUST NOT raise for a failing row (use safe_row)
        - MUST be deterministic for a given RunConfig
        """

    def __call__(self, run_config: RunConfig) -> SweepReport:
        self.logger.info(f"Command {self.command_name} starting ({run_config.run_id})")
        report = self.run(run_config)
        level = "warning" if report.failed else "info"
        getattr(self.logger, level)(
            f"Command {self.command_name} completed: "
            f"{sum(r.status is Status.FAIL for r in report.rows)} FAIL, "
            f"{sum(r.status is Status.ERROR for r in report.rows)} ERROR rows"
        )
        return report

    def new_report(self, run_config: RunConfig, **extra: Any) -> SweepReport:
        return SweepReport(
            run_id=run_config.run_id,
            title=self.title,
            config=run_config.model_dump(mode="json", exclude={"out"}),
            extra=dict(extra),
        )

    def safe_row(self, parameter: str, value: float, build: RowBuilder) -> SweepRow:
        """
        Build one row with error handling.

        Wraps build() to catch exceptions and record them on the row.
        """
        row = SweepRow(parameter=parameter, value=float(value))
        try:
            build(row)
        except HardyDivError as e:
            self.logger.warning(f"{self.command_name} row {parameter}={value}: {e.message}")
            row.error = e.to_dict()
        except Exception as e:
            self.logger.error(
                f"{self.command_name} row {parameter}={value} failed: {e}", exc_info=True
            )
            row.error = {"error": type(e).__name__, "message": str(e), "details": {}}
        if row.status is Status.FAIL:
            self.logger.warning(f"{self.command_name} row {parameter}={value} FAIL")
        return row

    def sweep(
        self, parameter: str, values: Iterable[float], build: Callable[[SweepRow], None]
    ) -> list[SweepRow]:
        """Rows for every value, computed concurrently, ordered by value."""
        ordered = sorted(float(v) for v in values)

        def one(value: float) -> SweepRow:
            return self.safe_row(parameter, value, build)

        with ThreadPoolExecutor(max_workers=self.settings.workers) as executor:
            return list(executor.map(one, ordered))

    def weight_from(self, run_config: RunConfig) -> WeightSpec:
        """Weight chosen by --weight-csv, --alpha or --beta (default beta = 0)."""
        if run_config.weight_csv is not None:
            return load_weight_csv(run_config.weight_csv)
        if run_config.alpha is not None:
            return log_power_weight(run_config.alpha)
        return power_weight(run_config.beta if run_config.beta is not None else 0.0)

    def config_value(self, dotted: str) -> Any:
        return config_value(self.config, dotted)
