"""
Command definitions for the certificate tool.

This module provides definitions for all the commands that can be run from
the command line or listed in a scenario.
"""

from typing import Dict, List, Optional

from .descriptions import (
    check_bounded_description,
    check_compact_description,
    run_description,
    selftest_description,
    sparse_bound_description,
    weight_class_description,
    weighted_estimate_description,
)


class CommandDefinition:
    """Represents a command that can be run by the certificate client."""

    def __init__(
        self,
        method: str,
        name: str,
        description: str,
        needs_scenario: bool = True,
        needs_weight: bool = False,
    ):
        """
        Initialize a command.

        Args:
            method: The client method name
            name: The subcommand name
            description: The help text of the command
            needs_scenario: Whether a scenario file is required
            needs_weight: Whether the scenario must define omega
        """
        self.method = method
        self.name = name
        self.description = description
        self.needs_scenario = needs_scenario
        self.needs_weight = needs_weight

    @property
    def summary(self) -> str:
        """First line of the description."""
        return " ".join(self.description.split("\n\n")[0].split())


def get_commands() -> List[CommandDefinition]:
    """
    Get all available commands.

    Returns:
        The list of commands, in the order shown by --help
    """
    return [
        CommandDefinition(
            method="check_bounded",
            name="check-bounded",
            description=check_bounded_description(),
        ),
        CommandDefinition(
            method="check_compact",
            name="check-compact",
            description=check_compact_description(),
        ),
        CommandDefinition(
            method="sparse_bound",
            name="sparse-bound",
            description=sparse_bound_description(),
        ),
        CommandDefinition(
            method="weight_class",
            name="weight-class",
            description=weight_class_description(),
            needs_weight=True,
        ),
        CommandDefinition(
            method="weighted_estimate",
            name="weighted-estimate",
            description=weighted_estimate_description(),
            needs_weight=True,
        ),
        CommandDefinition(
            method="selftest",
            name="selftest",
            description=selftest_description(),
            needs_scenario=False,
        ),
        CommandDefinition(
            method="run",
            name="run",
            description=run_description(),
        ),
    ]


def get_command(name: str) -> Optional[CommandDefinition]:
    commands: Dict[str, CommandDefinition] = {c.name: c for c in get_commands()}
    return commands.get(name)
