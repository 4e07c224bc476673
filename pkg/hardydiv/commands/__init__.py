"""
Commands module - one executable unit per CLI command

Each command:
- Inherits from BaseCommand
- Implements run(run_config) -> SweepReport
- Records row failures as ERROR rows instead of raising
"""

from typing import Optional, Type

from hardydiv.commands.base import BaseCommand
from hardydiv.commands.decompose import DecomposeCommand
from hardydiv.commands.divsolve import DivsolveCommand
from hardydiv.commands.geometry import GeometryCommand
from hardydiv.commands.hardy import HardyCommand
from hardydiv.commands.reproduce import ReproduceCommand, reproduce_corollary1, reproduce_corollary2
from hardydiv.commands.weights import WeightsCommand
from hardydiv.core.config import Command
from hardydiv.services.persistence import ReportStore

COMMANDS: dict[Command, Type[BaseCommand]] = {
    Command.HARDY: HardyCommand,
    Command.WEIGHTS: WeightsCommand,
    Command.GEOMETRY: GeometryCommand,
    Command.DECOMPOSE: DecomposeCommand,
    Command.DIVSOLVE: DivsolveCommand,
    Command.REPRODUCE: ReproduceCommand,
}


def create_command(command: Command, store: Optional[ReportStore] = None) -> BaseCommand:
    """Instantiate the command class; exporting commands get the store."""
    command_class = COMMANDS[Command(command)]
    if command_class in (DecomposeCommand, DivsolveCommand):
        return command_class(store=store)  # type: ignore[call-arg]
    return command_class()


__all__ = [
    "COMMANDS",
    "BaseCommand",
    "DecomposeCommand",
    "DivsolveCommand",
    "GeometryCommand",
    "HardyCommand",
    "ReproduceCommand",
    "WeightsCommand",
    "create_command",
    "reproduce_corollary1",
    "reproduce_corollary2",
]
