#!/usr/bin/env python3
"""
Bergman certificates - Main entry point

This script provides the command-line interface that runs boundedness,
compactness, sparse domination and weight certificates for weighted
composition operators on weighted Bergman spaces of the upper half-plane.
"""

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from .api.client import CertificateClient
from .errors import ScenarioValidationError
from .models.report import Report, emit
from .tools.definitions import CommandDefinition, get_command, get_commands
from .tools.parameters import CommandName, OutputFormat, RunSettings, load_scenario

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler(sys.stderr)],
)
logger = logging.getLogger("bergman-cert")

EXIT_VALIDATION = 1


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--scenario",
        type=str,
        help="Scenario TOML file, or the name of a bundled scenario",
    )
    parent.add_argument(
        "--out",
        type=str,
        help="JSON report file (default stdout) or CSV directory (default cwd)",
    )
    parent.add_argument(
        "--format",
        type=str,
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.JSON.value,
        help="Report format",
    )
    parent.add_argument("--refine", type=int, help="Number of lattice doublings (default 1)")
    parent.add_argument(
        "--threads",
        type=int,
        help="Worker threads; changes speed only (default BERGMAN_THREADS or 1)",
    )
    parent.add_argument("--debug", action="store_true", help="Enable debug logging")
    parent.add_argument("--timing", action="store_true", help="Write wall times to the report")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """The argument parser with one subcommand per command definition."""
    parser = argparse.ArgumentParser(
        prog="bergman-cert",
        description="Numerical certificates for weighted composition operators",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    parent = _common_options()
    for command in get_commands():
        subparsers.add_parser(
            command.name,
            parents=[parent],
            help=command.summary,
            description=command.description,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    return build_parser().parse_args(argv)


def _configure_logging(settings: RunSettings, debug: bool) -> None:
    level = logging.DEBUG if debug else logging.getLevelName(settings.log_level)
    if not isinstance(level, int):
        raise ScenarioValidationError(f"unknown log level {settings.log_level!r}")
    logging.getLogger().setLevel(level)
    if debug:
        logger.debug("Debug logging enabled")


def _execute(
    command: CommandDefinition, args: argparse.Namespace, client: CertificateClient
) -> Report:
    if not command.needs_scenario:
        return client.run_selftest()
    if not args.scenario:
        raise ScenarioValidationError(f"{command.name} needs --scenario")
    scenario = load_scenario(args.scenario)
    if command.name == "run":
        return client.run_scenario(scenario)
    return client.run_scenario(scenario, [CommandName(command.name)])


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Run one command and write its report.

    Args:
        argv: Arguments without the program name; sys.argv when omitted

    Returns:
        0 when complete, 1 on validation failure, 2 when a certificate is inconclusive
    """
    args = parse_args(argv)
    try:
        load_dotenv()
        settings = RunSettings.from_env(
            threads=args.threads, refine=args.refine, timing=args.timing or None
        )
        _configure_logging(settings, args.debug)
        command = get_command(args.command)
        if command is None:
            raise ValueError(f"Invalid command: {args.command}")

        client = CertificateClient(settings)
        logger.info(f"Running {command.name} with {settings.threads} thread(s)")
        report = _execute(command, args, client)
        emit(report, args.format, args.out)
    except ValueError as e:
        logger.error(f"Validation failed: {e}")
        return EXIT_VALIDATION
    except Exception as e:
        logger.exception(f"Error running {args.command}: {e}")
        return EXIT_VALIDATION

    if report.inconclusive:
        logger.warning("At least one certificate is inconclusive")
    return report.exit_code


def main() -> None:
    """Main entry point for the certificate tool."""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
