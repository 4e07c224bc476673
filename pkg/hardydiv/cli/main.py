"""
hardydiv CLI entry point.

Usage:
    hardydiv hardy --beta -1 --gamma 2
    hardydiv weights --alpha 1
    hardydiv geometry --gamma 3 --subdomains 8
    hardydiv decompose --beta 0.5 --res 64
    hardydiv divsolve --gamma 1 --subdomains 6
    hardydiv reproduce --corollary 1 --gamma 2
    hardydiv reproduce --config run.json

Exit code is 0 iff the report has no FAIL row or check.
"""

import sys
from typing import Any, Callable, Optional

import click
from rich.console import Console
from rich.table import Table

from hardydiv.commands import create_command
from hardydiv.core.config import Command, RunConfig
from hardydiv.core.errors import ConfigurationError, HardyDivError
from hardydiv.core.logging import get_logger, setup_logging
from hardydiv.domain.report import Status, SweepReport
from hardydiv.services.persistence import create_report_store

console = Console()
logger = get_logger("cli")

EXIT_FAIL = 1

STATUS_STYLE = {
    Status.PASS: "green",
    Status.FAIL: "red",
    Status.ERROR: "yellow",
}


def _float_list(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[list[float]]:
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'") from e


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Flags shared by every command; unset flags fall back to the config layers."""
    options = [
        click.option("--gamma", type=float, help="Cusp exponent gamma >= 1  [default: 2]"),
        click.option("--p", "p", type=float, help="Lebesgue exponent p > 1  [default: 2]"),
        click.option("--beta", type=float, help="Power weight x1^beta"),
        click.option("--alpha", type=float, help="Log weight (1 - ln x1)^alpha"),
        click.option("--n", "n", type=int, help="Truncation N  [default: 100000]"),
        click.option("--subdomains", type=int, help="Number of strips n_sub  [default: 6]"),
        click.option("--res", "resolution", type=int, help="Cells per side per strip  [default: 64]"),
        click.option("--tol", type=float, help="Outer solver tolerance  [default: 1e-10]"),
        click.option("--seed", type=int, help="Seed for sampled and random inputs  [default: 0]"),
        click.option("--out", type=click.Path(file_okay=False), help="Report directory"),
        click.option("--config", "config_file", type=click.Path(dir_okay=False), help="JSON run config"),
        click.option("--weight-csv", type=click.Path(dir_okay=False), help="Tabulated weight (x1,omega)"),
        click.option("--test-function", help="Library test function  [default: dipole]"),
        click.option("--verbose", "-v", is_flag=True, help="Verbose output"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def display_report(report: SweepReport) -> None:
    """Display report in terminal."""
    console.print(f"\n[bold blue]{report.title}[/bold blue]  [dim]{report.run_id}[/dim]\n")

    check_names: list[str] = []
    for row in report.rows:
        for check in row.checks:
            if check.name not in check_names:
                check_names.append(check.name)

    if report.rows:
        table = Table(title="Rows")
        table.add_column(report.rows[0].parameter, style="cyan", justify="right")
        table.add_column("Status")
        for name in check_names:
            table.add_column(f"{name} (measured <= bound)", justify="right")

        for row in report.rows:
            style = STATUS_STYLE[row.status]
            checks = {c.name: c for c in row.checks}
            cells = []
            for name in check_names:
                check = checks.get(name)
                cells.append("" if check is None else f"{check.measured:.6g} <= {check.bound:.6g}")
            table.add_row(f"{row.value:g}", f"[{style}]{row.status.value}[/{style}]", *cells)

        console.print(table)
        console.print()

    if report.checks:
        table = Table(title="Run checks")
        table.add_column("Check", style="cyan")
        table.add_column("Measured", justify="right")
        table.add_column("Bound", justify="right")
        table.add_column("Status")
        for check in report.checks:
            style = STATUS_STYLE[check.status]
            table.add_row(
                check.name,
                f"{check.measured:.6g}",
                f"{check.bound:.6g}",
                f"[{style}]{check.status.value}[/{style}]",
            )
        console.print(table)
        console.print()

    errors = [row for row in report.rows if row.error]
    if errors:
        console.print("[bold yellow]Errors[/bold yellow]")
        for row in errors:
            console.print(f"  [{row.parameter}={row.value:g}] {row.error.get('message')}")  # type: ignore[union-attr]
        console.print()


def execute(
    command: Command, config_file: Optional[str] = None, verbose: bool = False, **flags: Any
) -> None:
    """Build the RunConfig, run the command, persist and display the report."""
    setup_logging(log_level="DEBUG" if verbose else None)
    try:
        run_config = RunConfig.build(command.value, config_file=config_file, overrides=flags)
    except ConfigurationError as e:
        details = "; ".join(e.details.get("errors", []))
        raise click.UsageError(f"{e.message}{': ' + details if details else ''}") from e

    store = create_report_store(run_config.out)
    try:
        report = create_command(command, store=store)(run_config)
    except HardyDivError as e:
        logger.error(f"{command.value} failed: {e.message}")
        console.print(f"[bold red]{e.code}[/bold red] {e.message}")
        sys.exit(EXIT_FAIL)

    path = store.save_report(report)
    display_report(report)
    console.print(f"Report written to {path}")
    if report.failed:
        sys.exit(EXIT_FAIL)


@click.group()
def main() -> None:
    """hardydiv - weighted Hardy inequalities and the divergence equation on cusps"""


@main.command("hardy")
@run_options
def hardy(**kwargs: Any) -> None:
    """A_N, 4 A_N and the empirical constant for the induced Hardy sequence."""
    execute(Command.HARDY, **kwargs)


@main.command("weights")
@run_options
def weights(**kwargs: Any) -> None:
    """Admissibility of a weight and its closed-form constants."""
    execute(Command.WEIGHTS, **kwargs)


@main.command("geometry")
@run_options
def geometry(**kwargs: Any) -> None:
    """Measures and star-shape certificates of the strips."""
    execute(Command.GEOMETRY, **kwargs)


@main.command("decompose")
@run_options
def decompose(**kwargs: Any) -> None:
    """Zero-mean decomposition of a library test function."""
    execute(Command.DECOMPOSE, **kwargs)


@main.command("divsolve")
@run_options
def divsolve(**kwargs: Any) -> None:
    """Solve div u = f on the cusp and check the weighted estimate."""
    execute(Command.DIVSOLVE, **kwargs)


@main.command("reproduce")
@run_options
@click.option("--corollary", type=click.IntRange(1, 2), help="1: power weights, 2: log weights")
@click.option("--betas", callback=_float_list, help="Comma-separated beta values")
@click.option("--alphas", callback=_float_list, help="Comma-separated alpha values")
def reproduce(**kwargs: Any) -> None:
    """Sweep power weights over beta (--corollary 1) or log weights over alpha (--corollary 2)."""
    execute(Command.REPRODUCE, **kwargs)


if __name__ == "__main__":
    main()
