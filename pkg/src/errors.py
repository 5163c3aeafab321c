"""
Exception hierarchy for the certificate toolkit.

Validation problems derive from ValueError so callers that only care about
bad input can catch them uniformly; numerical failures have their own base.
"""

from typing import Any, List, Optional


class CertificationError(Exception):
    """Base class for failures raised while computing a certificate."""


class ScenarioValidationError(ValueError):
    """A scenario, parameter set or expression failed validation."""


class SymbolSyntaxError(ScenarioValidationError):
    """An expression string could not be parsed.

    Attributes:
        offset: Byte offset of the offending token in the UTF-8 source.
        text: The source text.
    """

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} (at byte {offset})")


class SelfMapViolationError(ScenarioValidationError):
    """The composition symbol leaves the upper half-plane on sampled points."""

    def __init__(self, violations: List[Any], min_imag: Optional[float] = None):
        self.violations = violations
        self.min_imag = min_imag
        preview = ", ".join(str(v) for v in violations[:5])
        more = "" if len(violations) <= 5 else f" and {len(violations) - 5} more"
        super().__init__(
            f"symbol is not a self-map of the upper half-plane: {len(violations)} "
            f"violation(s) [{preview}{more}]"
        )


class SingularIntegrandError(CertificationError):
    """A quadrature sample inside the integration region was NaN or infinite."""

    def __init__(self, location: complex):
        self.location = location
        super().__init__(
            f"singular integrand inside the integration region near z={location!r}; "
            "declare a pole for this point in the scenario"
        )


class EmptyExponentWindowError(ValueError):
    """No admissible integer N exists for a fractional sparse form."""

    def __init__(self, p: float, q: float):
        self.p = p
        self.q = q
        super().__init__(
            f"no integer N satisfies N >= 1, N<p<q<p+N for p={p}, q={q}"
        )
