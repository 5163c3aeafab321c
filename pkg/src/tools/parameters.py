"""
Parameter definitions for the certificate commands.

This module provides Pydantic models for scenario files and for the run
settings gathered from the environment and the command line.
"""

import logging
import os
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..carleson.lattice import ApexLattice
from ..errors import ScenarioValidationError
from ..geometry import Interval, TruncatedBoxCollection, three_grid_collections
from ..quadrature import QuadratureSpec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

BUNDLED_SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


class CommandName(str, Enum):
    """Certificate commands a scenario can request."""

    CHECK_BOUNDED = "check-bounded"
    CHECK_COMPACT = "check-compact"
    SPARSE_BOUND = "sparse-bound"
    WEIGHT_CLASS = "weight-class"
    WEIGHTED_ESTIMATE = "weighted-estimate"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


# === SCENARIO SECTIONS ===

class SymbolSettings(_Section):
    """Expressions in z for the multiplier, the composition symbol and the weight."""
    u: str = Field("1", description="Holomorphic multiplier u(z)")
    phi: str = Field("z", description="Holomorphic self-map phi(z) of the upper half-plane")
    omega: Optional[str] = Field(None, description="Nonnegative weight omega(z)")


class ExponentSettings(_Section):
    """Exponents shared by all certificates of a scenario."""
    p: float = Field(2.0, ge=1.0, description="Source exponent")
    q: float = Field(2.0, ge=1.0, description="Target exponent, q >= p")
    alpha: float = Field(0.0, gt=-1.0, description="Weight exponent of dA_alpha")
    gamma: float = Field(1.0, ge=1.0, description="Averaging exponent of the sparse form")
    N: Optional[int] = Field(None, ge=1, description="Split of |f|^q; default 1 when p = q")
    s: Optional[float] = Field(None, description="Hoelder exponent of the weight class")
    betas: List[float] = Field(
        default_factory=list, description="Source exponents in [p, q] for the interpolation sweep"
    )

    @model_validator(mode="after")
    def _check_order(self) -> "ExponentSettings":
        if self.q < self.p:
            raise ValueError(f"q must be at least p, got p={self.p}, q={self.q}")
        return self


class LatticeSettings(_Section):
    """Apex lattice overrides: explicit heights, or a log-uniform range."""
    x: Optional[List[float]] = Field(None, description="Apex abscissae")
    y: Optional[List[float]] = Field(None, description="Apex heights")
    y_min: Optional[float] = Field(None, gt=0.0, description="Smallest height of a log range")
    y_max: Optional[float] = Field(None, gt=0.0, description="Largest height of a log range")
    per_octave: int = Field(1, ge=1, description="Heights per doubling in a log range")

    @model_validator(mode="after")
    def _check_range(self) -> "LatticeSettings":
        if (self.y_min is None) != (self.y_max is None):
            raise ValueError("y_min and y_max must be given together")
        if self.y is not None and self.y_min is not None:
            raise ValueError("give either y or y_min/y_max, not both")
        if self.y_min is not None and self.y_max is not None and self.y_max <= self.y_min:
            raise ValueError("y_max must exceed y_min")
        return self

    def build(self, seed: Optional[int] = None) -> ApexLattice:
        """
        The apex lattice, jittered in x when a seed is given.

        Args:
            seed: Seed of the abscissa jitter; None keeps the lattice exact

        Returns:
            The lattice
        """
        lattice = ApexLattice()
        x = self.x if self.x is not None else lattice.x
        if self.y_min is not None and self.y_max is not None:
            lattice = ApexLattice.log_uniform(x, self.y_min, self.y_max, self.per_octave)
        else:
            lattice = ApexLattice(x=x, y=self.y if self.y is not None else lattice.y)
        if seed is None:
            return lattice
        spacing = min((b - a for a, b in zip(lattice.x, lattice.x[1:])), default=1.0)
        rng = np.random.default_rng(seed)
        jitter = rng.uniform(-0.25 * spacing, 0.25 * spacing, size=len(lattice.x))
        return lattice.model_copy(update={"x": [x + float(d) for x, d in zip(lattice.x, jitter)]})


class QuadratureSettings(_Section):
    """Overrides of the quadrature settings; unset fields keep the run defaults."""
    rel_tol: Optional[float] = Field(None, gt=0.0, description="Relative tolerance")
    abs_tol: Optional[float] = Field(None, gt=0.0, description="Absolute tolerance")
    max_cells: Optional[int] = Field(None, ge=1, description="Cap on adaptive cells")
    span_factor: Optional[float] = Field(None, gt=1.0, description="Window half-width factor")
    poles: List[Tuple[float, float]] = Field(
        default_factory=list, description="Declared singular points (x, y) of the integrands"
    )
    pole_radius: Optional[float] = Field(None, gt=0.0, description="Excluded radius at poles")

    def build(self, defaults: "RunSettings") -> QuadratureSpec:
        updates: Dict[str, Any] = {"poles": list(self.poles)}
        for name in ("rel_tol", "max_cells"):
            value = getattr(self, name)
            updates[name] = value if value is not None else getattr(defaults, name)
        for name in ("abs_tol", "span_factor", "pole_radius"):
            value = getattr(self, name)
            if value is not None:
                updates[name] = value
        return QuadratureSpec(**updates)


class TailSettings(_Section):
    """Declared decay exponents at infinity."""
    testing: Optional[float] = Field(
        None, description="Decay exponent of the testing integrand, for non-affine symbols"
    )
    weight_decay: Optional[float] = Field(
        None, description="k with omega = O(|z|^-k); k <= 0 marks the class integral divergent"
    )


class SparseSettings(_Section):
    """Truncation of the three grids and the sparse-bound options."""

    level_min: int = Field(-8, description="Smallest box level")
    level_max: int = Field(6, description="Largest box level")
    window: Tuple[float, float] = Field((-64.0, 64.0), description="Base window of the boxes")
    corpus_t: Optional[float] = Field(
        None, description="Exponent of the corpus test functions; default p"
    )
    drift: bool = Field(True, description="Also evaluate on a doubled truncation")
    kernel_points: int = Field(0, ge=0, description="Points for the pointwise kernel bound")
    terms: bool = Field(
        False, description="Report the per-box summands of the first corpus function"
    )

    @model_validator(mode="after")
    def _check_truncation(self) -> "SparseSettings":
        if self.level_max < self.level_min:
            raise ValueError("level_max must be at least level_min")
        if self.window[1] <= self.window[0]:
            raise ValueError("window must have positive length")
        return self

    def collections(self) -> List[TruncatedBoxCollection]:
        window = Interval.from_endpoints(*self.window)
        return three_grid_collections(self.level_min, self.level_max, window)


class CompactnessSettings(_Section):
    """Escape sequences and the sparse tail functional."""
    terms: int = Field(12, ge=2, description="Terms of each escape sequence")
    tolerance: float = Field(1e-3, gt=0.0, description="Vanishing threshold")
    sparse_tail: bool = Field(False, description="Also compute the sparse tail profile")
    n_max: int = Field(8, ge=1, description="Largest index of the exhausting family")
    direction: str = Field("boundary", description="Escape direction: boundary or upward")

    @field_validator("direction")
    @classmethod
    def _check_direction(cls, value: str) -> str:
        if value not in ("boundary", "upward"):
            raise ValueError(f"direction must be 'boundary' or 'upward', got {value!r}")
        return value


class WeightSettings(_Section):
    """Apex heights for the Carleson profile of omega."""

    apex_ys: List[float] = Field(
        default_factory=lambda: [0.4, 0.2, 0.1, 0.05], description="Decreasing apex heights"
    )
    value_at: Tuple[float, float] = Field(
        (0.0, 1.0), description="Point zeta at which the class integral is reported"
    )

    @field_validator("apex_ys")
    @classmethod
    def _positive(cls, value: List[float]) -> List[float]:
        if not value or min(value) <= 0.0:
            raise ValueError("apex heights must be positive")
        return value


class Scenario(_Section):
    """A scenario file: symbols, exponents, overrides and the certificates to run."""
    name: str = Field(..., description="Scenario name")
    description: str = Field("", description="Free text")
    certificates: List[CommandName] = Field(
        default_factory=list, description="Certificates executed by the run command"
    )
    seed: Optional[int] = Field(None, description="Seed of the lattice jitter; none by default")
    symbols: SymbolSettings = Field(default_factory=SymbolSettings)
    exponents: ExponentSettings = Field(default_factory=ExponentSettings)
    lattice: LatticeSettings = Field(default_factory=LatticeSettings)
    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    tails: TailSettings = Field(default_factory=TailSettings)
    sparse: SparseSettings = Field(default_factory=SparseSettings)
    compactness: CompactnessSettings = Field(default_factory=CompactnessSettings)
    weights: WeightSettings = Field(default_factory=WeightSettings)


# === RUN SETTINGS ===

def _env_value(name: str, cast: Any) -> Any:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return cast(raw)
    except ValueError as e:
        raise ScenarioValidationError(f"{name}={raw!r} is not valid: {e}") from e


class RunSettings(BaseModel):
    """Settings of one invocation: environment defaults overridden by flags."""

    model_config = ConfigDict(frozen=True)

    threads: int = Field(1, ge=1, description="Worker threads; never changes results")
    refine: int = Field(1, ge=0, description="Lattice doublings for the stability check")
    rel_tol: float = Field(1e-6, gt=0.0, description="Default relative tolerance")
    max_cells: int = Field(20000, ge=1, description="Default cap on adaptive cells")
    log_level: str = Field("INFO", description="Logging level name")
    timing: bool = Field(False, description="Write wall times into the report")

    @classmethod
    def from_env(cls, **overrides: Any) -> "RunSettings":
        """
        Defaults from BERGMAN_* variables, then the given overrides.

        Args:
            overrides: Values from the command line; None entries are ignored

        Returns:
            The settings
        """
        values: Dict[str, Any] = {
            "threads": _env_value("BERGMAN_THREADS", int),
            "rel_tol": _env_value("BERGMAN_REL_TOL", float),
            "max_cells": _env_value("BERGMAN_MAX_CELLS", int),
            "log_level": _env_value("BERGMAN_LOG_LEVEL", lambda v: v.strip().upper()),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        values = {key: value for key, value in values.items() if value is not None}
        try:
            return cls(**values)
        except ValidationError as e:
            raise ScenarioValidationError(f"Invalid run settings: {e}") from e


def parse_scenario(text: Union[str, bytes], source: str = "<scenario>") -> Scenario:
    """
    Parse and validate scenario TOML.

    Args:
        text: TOML source
        source: Name used in error messages

    Returns:
        The validated scenario
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ScenarioValidationError(f"{source}: invalid TOML: {e}") from e
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        raise ScenarioValidationError(f"{source}: invalid scenario: {e}") from e


def bundled_scenarios() -> List[str]:
    return sorted(path.stem for path in BUNDLED_SCENARIOS.glob("*.toml"))


def resolve_scenario(name: Union[str, Path]) -> Path:
    """A scenario path, or the bundled scenario of that name when no such file exists."""
    path = Path(name)
    if not path.exists() and path.suffix == "" and (BUNDLED_SCENARIOS / f"{path}.toml").exists():
        return BUNDLED_SCENARIOS / f"{path}.toml"
    return path


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = resolve_scenario(path)
    try:
        text = path.read_bytes()
    except OSError as e:
        raise ScenarioValidationError(f"cannot read scenario {path}: {e}") from e
    scenario = parse_scenario(text, source=str(path))
    logger.info(f"Loaded scenario '{scenario.name}' from {path}")
    return scenario
