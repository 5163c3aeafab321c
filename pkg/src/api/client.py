"""
Certificate client implementation.

This module provides the CertificateClient class, which validates scenarios
and dispatches the certificate commands.
"""

import logging
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Type, Union

from pydantic import ValidationError

from ..errors import ScenarioValidationError, SymbolSyntaxError
from ..models.report import CertificateEntry, Report
from ..sparse import SparseFormParams
from ..symbols import SampleLattice, SymbolExpression, WeightExpression, require_self_map
from ..tools.definitions import CommandDefinition, get_command
from ..tools.parameters import CommandName, RunSettings, Scenario, load_scenario
from ..tools.utils import set_thread_count
from ..weights import BWeightParams
from .functions import (
    ScenarioContext,
    check_bounded,
    check_compact,
    selftest,
    sparse_bound,
    weight_class,
    weighted_estimate,
)

logger = logging.getLogger(__name__)

# Heights stop at 2^6 so that weights such as exp(im(z)) stay finite on the samples.
WEIGHT_SAMPLES = SampleLattice(y=[2.0**k for k in range(-10, 7)])


def _definition(command: CommandName) -> CommandDefinition:
    definition = get_command(command.value)
    if definition is None:
        raise ScenarioValidationError(f"Unknown command: {command.value}")
    return definition


def _parse(text: str, field: str, kind: Type[SymbolExpression]) -> SymbolExpression:
    try:
        return kind.parse(text)
    except SymbolSyntaxError:
        logger.error(f"Cannot parse symbols.{field} = {text!r}")
        raise


class CertificateClient:
    """Client that validates scenarios and runs certificate commands."""

    def __init__(self, settings: Optional[RunSettings] = None):
        """
        Initialize the client.

        Args:
            settings: Run settings; defaults when omitted
        """
        self.settings = settings or RunSettings()
        set_thread_count(self.settings.threads)

    def prepare(
        self, scenario: Scenario, commands: Sequence[CommandName] = ()
    ) -> ScenarioContext:
        """
        Parse and validate everything the commands need, before any quadrature.

        Args:
            scenario: The scenario
            commands: The commands about to run

        Returns:
            The validated context
        """
        symbols, e = scenario.symbols, scenario.exponents
        u = _parse(symbols.u, "u", SymbolExpression)
        phi = _parse(symbols.phi, "phi", SymbolExpression)
        self_map = require_self_map(phi)

        omega = None
        if symbols.omega is not None:
            omega = _parse(symbols.omega, "omega", WeightExpression)
            negative = omega.negative_samples(WEIGHT_SAMPLES.points())
            if negative:
                raise ScenarioValidationError(
                    f"omega = {symbols.omega} is not a nonnegative weight: {len(negative)} "
                    f"sample(s), first at z={negative[0]}"
                )

        weight = None
        if any(_definition(command).needs_weight for command in commands):
            if omega is None:
                raise ScenarioValidationError("weight commands need symbols.omega")
            try:
                weight = BWeightParams(
                    q=e.q,
                    s=e.s,
                    alpha=e.alpha,
                    u=u,
                    phi=phi,
                    omega=omega,
                    weight_decay=scenario.tails.weight_decay,
                )
            except ValidationError as err:
                raise ScenarioValidationError(f"Invalid weight parameters: {err}") from err

        sparse = None
        tail = CommandName.CHECK_COMPACT in commands and scenario.compactness.sparse_tail
        if CommandName.SPARSE_BOUND in commands or tail:
            try:
                sparse = SparseFormParams(N=e.N or 1, gamma=e.gamma, p=e.p, q=e.q)
            except ValidationError as err:
                raise ScenarioValidationError(f"Invalid sparse form parameters: {err}") from err
            if tail:
                sparse.check_compactness()

        try:
            spec = scenario.quadrature.build(self.settings)
        except ValidationError as err:
            raise ScenarioValidationError(f"Invalid quadrature settings: {err}") from err
        context = ScenarioContext(
            scenario=scenario,
            u=u,
            phi=phi,
            spec=spec,
            lattice=scenario.lattice.build(scenario.seed),
            self_map=self_map,
            omega=omega,
            weight=weight,
            sparse=sparse,
            collections=scenario.sparse.collections(),
        )
        logger.info(f"Scenario '{scenario.name}' validated for {len(commands)} command(s)")
        return context

    def run(self, method: str, context: Optional[ScenarioContext] = None) -> CertificateEntry:
        """
        Run a method on a validated scenario.

        Args:
            method: The method to run
            context: The validated scenario; not needed by selftest

        Returns:
            The report entry
        """
        try:
            return self._execute_method(method, context)
        except ScenarioValidationError:
            raise
        except Exception as e:
            logger.exception(f"Error executing method {method}: {e}")
            raise

    def _execute_method(
        self, method: str, context: Optional[ScenarioContext]
    ) -> CertificateEntry:
        method_map: Dict[str, Callable] = {
            "check_bounded": check_bounded,
            "check_compact": check_compact,
            "sparse_bound": sparse_bound,
            "weight_class": weight_class,
            "weighted_estimate": weighted_estimate,
            "selftest": selftest,
        }

        if method not in method_map:
            raise ValueError(f"Invalid method: {method}")
        if context is None and method != "selftest":
            raise ValueError(f"Method {method} needs a scenario")

        start = time.perf_counter()
        entry = method_map[method](self, context)
        elapsed = time.perf_counter() - start
        logger.info(f"{entry.command} finished in {elapsed:.2f}s: {entry.verdict or entry.status}")
        if self.settings.timing:
            entry = entry.model_copy(update={"seconds": elapsed})
        return entry

    def run_scenario(
        self, scenario: Scenario, commands: Optional[Sequence[CommandName]] = None
    ) -> Report:
        """
        Validate a scenario, then run its certificates in order.

        Args:
            scenario: The scenario
            commands: Commands to run instead of the scenario's certificates list

        Returns:
            The report
        """
        commands = list(commands) if commands is not None else list(scenario.certificates)
        if not commands:
            raise ScenarioValidationError(f"scenario '{scenario.name}' requests no certificates")
        context = self.prepare(scenario, commands)
        start = time.perf_counter()
        entries: List[CertificateEntry] = [
            self.run(_definition(command).method, context) for command in commands
        ]
        return Report(
            scenario=scenario.model_dump(mode="json"),
            seed=scenario.seed,
            certificates=entries,
            seconds=time.perf_counter() - start if self.settings.timing else None,
        )

    def run_selftest(self) -> Report:
        return Report(certificates=[self.run("selftest")])


def run_scenario(path: Union[str, Path], settings: Optional[RunSettings] = None) -> Report:
    """Load a scenario file and run every certificate it lists."""
    return CertificateClient(settings).run_scenario(load_scenario(path))
