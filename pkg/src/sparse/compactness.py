"""
The compactness tail functional: sparse sums restricted to boxes whose upper
box misses the compact set K_n.
"""

import logging
from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from ..carleson.testfunctions import TestFunction
from ..geometry import TruncatedBoxCollection
from ..quadrature import QuadratureSpec
from ..symbols import SymbolExpression
from .forms import FormExponents, LevelTerms, SparseEvaluator
from .params import ExhaustingFamily, SparseFormParams

logger = logging.getLogger(__name__)


class CompactnessTailProfile(BaseModel):
    """Tail values for n = 1..n_max; the sup runs over the given finite sequence only."""

    ns: List[int]
    tails: List[float] = Field(..., description="sup over the sequence of the tail at each n")
    per_function: List[List[float]] = Field(..., description="Tail of each f_m at each n")
    argmax: List[int] = Field(..., description="Index m attaining the sup at each n")
    monotone: bool
    final_ratio: float = Field(..., description="tails[-1] / tails[0], 0 when tails[0] is 0")
    sequence_length: int


def escaping_sequence(
    direction: str, t: float, alpha: float, terms: int = 12
) -> List[TestFunction]:
    """f_{a_m, t} with a_m = i/m ("boundary") or a_m = m i ("upward"), m = 1..terms."""
    if direction == "boundary":
        return [TestFunction.at(1j / m, t, alpha) for m in range(1, terms + 1)]
    if direction == "upward":
        return [TestFunction.at(1j * m, t, alpha) for m in range(1, terms + 1)]
    raise ValueError(f"unknown escape direction {direction!r}")


def _avoiding(family: ExhaustingFamily, n: int) -> Callable[[LevelTerms], np.ndarray]:
    def select(terms: LevelTerms) -> np.ndarray:
        return family.upper_box_avoids(n, terms.lefts, np.full_like(terms.lefts, terms.length))

    return select


def compactness_profile(
    f_sequence: Sequence[Callable],
    u: SymbolExpression,
    phi: SymbolExpression,
    params: SparseFormParams,
    alpha: float,
    family: ExhaustingFamily,
    n_max: int,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
) -> CompactnessTailProfile:
    """
    Tail of mu(Q)^{1/gamma'} A(Q)^{1/gamma} <|f_m|^N>_Q <|f_m|^{q-N}>_{Q,gamma} over
    the boxes with Q^up disjoint from K_n, for every n up to ``n_max``.

    Args:
        f_sequence: The functions f_m (bounded in norm, tending to 0 on compacts)
        u: Multiplier symbol
        phi: Composition symbol
        params: Exponents satisfying the compactness constraint
        alpha: Weight exponent
        family: The exhausting family K_n
        n_max: Largest index
        collections: Truncated collections
        spec: Quadrature settings

    Returns:
        The profile over n
    """
    params.check_compactness()
    if not f_sequence:
        raise ValueError("the function sequence is empty")
    evaluator = SparseEvaluator(collections, alpha, u, phi, params.q, spec)
    exponents = FormExponents(
        first_power=float(params.N),
        second_power=params.second_power,
        gamma=params.gamma,
        mu_exponent=params.mu_exponent,
        measure_exponent=1.0 / params.gamma,
    )
    ns = list(range(1, n_max + 1))
    per_function = []
    for f in f_sequence:
        terms = evaluator.level_terms(f, exponents)
        per_function.append(
            [evaluator.summarize(terms, select=_avoiding(family, n)).value for n in ns]
        )
    table = np.array(per_function)
    tails = [float(v) for v in table.max(axis=0)]
    argmax = [int(k) for k in table.argmax(axis=0)]
    monotone = all(b <= a for a, b in zip(tails, tails[1:]))
    final_ratio = tails[-1] / tails[0] if tails[0] > 0.0 else 0.0
    logger.info(f"Compactness tail: n=1 {tails[0]:.4g}, n={n_max} {tails[-1]:.4g}")
    return CompactnessTailProfile(
        ns=ns,
        tails=tails,
        per_function=per_function,
        argmax=argmax,
        monotone=monotone,
        final_ratio=final_ratio,
        sequence_length=len(f_sequence),
    )


def compactness_tail(
    f_sequence: Sequence[Callable],
    u: SymbolExpression,
    phi: SymbolExpression,
    params: SparseFormParams,
    alpha: float,
    family: ExhaustingFamily,
    n: int,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """The tail value at index n."""
    profile = compactness_profile(
        f_sequence, u, phi, params, alpha, family, n, collections, spec
    )
    return profile.tails[-1]
