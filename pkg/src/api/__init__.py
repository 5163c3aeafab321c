"""Scenario client and certificate command handlers."""

from .client import CertificateClient, run_scenario
from .functions import ScenarioContext

__all__ = ["CertificateClient", "ScenarioContext", "run_scenario"]
