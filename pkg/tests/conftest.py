"""Shared fixtures: symbols, small truncations and scenario files."""

from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from src.geometry import Interval, TruncatedBoxCollection, three_grid_collections
from src.quadrature import QuadratureSpec
from src.symbols import SymbolExpression, WeightExpression, identity, translation
from src.tools.utils import set_thread_count


@pytest.fixture(autouse=True)
def single_thread():
    set_thread_count(1)
    yield
    set_thread_count(1)


@pytest.fixture
def spec() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture
def one() -> SymbolExpression:
    return SymbolExpression.parse("1")


@pytest.fixture
def identity_phi() -> SymbolExpression:
    return identity()


@pytest.fixture
def shift_phi() -> SymbolExpression:
    """phi(z) = z + i."""
    return translation(1j)


@pytest.fixture
def disk_omega() -> WeightExpression:
    return WeightExpression.parse("indisk(z) / abs(z)")


@pytest.fixture
def unit_box() -> TruncatedBoxCollection:
    """The single box over [0, 1) of the standard grid."""
    return TruncatedBoxCollection(1, 0, 0, Interval(0, 1))


@pytest.fixture
def two_level_box() -> TruncatedBoxCollection:
    """[0, 1) and its two children on the standard grid."""
    return TruncatedBoxCollection(1, -1, 0, Interval(0, 1))


@pytest.fixture
def small_collections():
    return three_grid_collections(-2, 1, Interval.from_endpoints(-2, 2))


@pytest.fixture
def ones() -> Callable[[np.ndarray], np.ndarray]:
    return lambda z: np.ones(np.shape(z))


@pytest.fixture
def write_scenario(tmp_path: Path) -> Callable[[str], Path]:
    """Write scenario TOML into a temporary file and return its path."""

    def write(text: str, name: str = "scenario.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
