"""
Truncated sparse forms over the three shifted grids.

Every form here is a sum over boxes Q of

    mu(Q)^{m} A_alpha(Q)^{k} <|f|^{e1}>_Q <|f|^{e2}>_{Q,gamma}

for exponents (e1, e2, gamma, m, k) fixed by the form. A single evaluator
computes the box integrals of |f|^{e1} and |f|^{gamma e2} for all boxes at
once; the forms only differ in their exponents and in which boxes they keep.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from ..errors import ScenarioValidationError
from ..geometry import Region, TruncatedBoxCollection
from ..quadrature import QuadratureSpec, integrate_region_box, measure_alpha
from ..symbols import SymbolExpression
from .params import ExponentWindow, SparseFormParams
from .tables import BoxTable, Magnitude, SlabTable

logger = logging.getLogger(__name__)


def magnitude_of(f: Callable) -> Magnitude:
    """z -> |f(z)| as a float array of the shape of z."""
    abs_power = getattr(f, "abs_power", None)
    if abs_power is not None:
        return lambda z: abs_power(z, 1.0)

    def magnitude(z: np.ndarray) -> np.ndarray:
        return np.abs(np.broadcast_to(np.asarray(f(z)), np.shape(z))).astype(float)

    return magnitude


@dataclass(frozen=True)
class FormExponents:
    first_power: float
    second_power: float
    gamma: float = 1.0
    mu_exponent: float = 0.0
    measure_exponent: float = 1.0


@dataclass
class LevelTerms:
    """Summands of one level of one grid, with what they are built from."""

    grid_id: int
    level: int
    lefts: np.ndarray
    length: float
    in_window: np.ndarray
    mu_term: np.ndarray
    measure_term: float
    avg1: np.ndarray
    avg2: np.ndarray
    summand: np.ndarray
    relative_error: np.ndarray


class SparseTerm(BaseModel):
    grid: int
    level: int
    left: float
    mu_term: float
    measure_term: float
    avg1: float
    avg2: float
    summand: float


class SparseFormResult(BaseModel):
    """A truncated sparse sum with its accuracy."""

    value: float
    lower_bound_only: bool = Field(
        ..., description="Some box integral missed the tolerance; the value is then a lower bound"
    )
    relative_error: float
    max_relative_error: float
    boxes: int
    terms: Optional[List[SparseTerm]] = None


def _ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    out = np.where(numerator > 0.0, np.inf, 0.0)
    return np.divide(numerator, denominator, out=out, where=denominator > 0.0)


class SparseEvaluator:
    """
    Box tables of a set of truncated collections, with the pullback measure
    of (u, phi, q) built on first use.
    """

    def __init__(
        self,
        collections: Sequence[TruncatedBoxCollection],
        alpha: float,
        u: Optional[SymbolExpression] = None,
        phi: Optional[SymbolExpression] = None,
        q: Optional[float] = None,
        spec: Optional[QuadratureSpec] = None,
    ):
        if not collections:
            raise ValueError("at least one box collection is required")
        self.tables = [SlabTable(collection, alpha) for collection in collections]
        self.alpha = alpha
        self.symbols = (u, phi, q)
        self.spec = spec or QuadratureSpec()
        self._mu: Optional[List[BoxTable]] = None

    def mu_tables(self) -> List[BoxTable]:
        if self._mu is None:
            u, phi, q = self.symbols
            if u is None or phi is None or q is None:
                raise ValueError("the pullback measure needs u, phi and q")
            self._mu = [table.pullback_table(u, phi, q, self.spec) for table in self.tables]
        return self._mu

    def level_terms(self, f: Callable, exponents: FormExponents) -> List[LevelTerms]:
        """Summands of every box, ordered by grid, then level from the top, then position."""
        gamma = exponents.gamma
        second = gamma * exponents.second_power
        powers = sorted({exponents.first_power, second})
        mu_tables = self.mu_tables() if exponents.mu_exponent != 0.0 else None
        magnitude = magnitude_of(f)

        out = []
        for position, table in enumerate(self.tables):
            integrals = table.box_integrals(magnitude, powers)
            first_table = integrals[exponents.first_power]
            second_table = integrals[second]
            for cells in table.levels():
                level = cells.level
                measure = table.measure(level)
                i1, e1 = first_table.values[level], first_table.errors[level]
                i2, e2 = second_table.values[level], second_table.errors[level]
                avg1 = i1 / measure
                avg2 = (i2 / measure) ** (1.0 / gamma)
                if mu_tables is None:
                    mu_term = np.ones_like(avg1)
                    mu_error = np.zeros_like(avg1)
                else:
                    mu = mu_tables[position].values[level]
                    mu_term = mu**exponents.mu_exponent
                    mu_error = _ratio(mu_tables[position].errors[level], mu) * exponents.mu_exponent
                measure_term = measure**exponents.measure_exponent
                summand = mu_term * measure_term * avg1 * avg2
                relative = _ratio(e1, i1) + _ratio(e2, i2) / gamma + mu_error
                out.append(
                    LevelTerms(
                        grid_id=table.grid_id,
                        level=level,
                        lefts=cells.lefts,
                        length=cells.length,
                        in_window=cells.in_window,
                        mu_term=mu_term,
                        measure_term=measure_term,
                        avg1=avg1,
                        avg2=avg2,
                        summand=summand,
                        relative_error=np.where(summand > 0.0, relative, 0.0),
                    )
                )
        return out

    def summarize(
        self,
        terms: Sequence[LevelTerms],
        select: Optional[Callable[[LevelTerms], np.ndarray]] = None,
        keep_terms: bool = False,
    ) -> SparseFormResult:
        """Sum the selected in-window summands in their fixed order."""
        parts, errors, rows = [], [], []
        max_relative = 0.0
        count = 0
        for level_terms in terms:
            mask = level_terms.in_window
            if select is not None:
                mask = mask & select(level_terms)
            summand = level_terms.summand[mask]
            relative = level_terms.relative_error[mask]
            parts.append(summand)
            errors.append(summand * np.where(np.isfinite(relative), relative, 0.0))
            if relative.size:
                max_relative = max(max_relative, float(relative.max()))
            count += int(mask.sum())
            if keep_terms:
                rows.extend(_rows(level_terms, mask))
        value = math.fsum(np.concatenate(parts)) if parts else 0.0
        error = math.fsum(np.concatenate(errors)) if errors else 0.0
        relative_error = error / value if value > 0.0 else 0.0
        lower_bound_only = not math.isfinite(max_relative) or error > self.spec.tolerance_for(value)
        if lower_bound_only:
            logger.warning(
                f"Sparse sum {value:.6g} has relative error {relative_error:.2e}; "
                "reporting it as a lower bound"
            )
        return SparseFormResult(
            value=value,
            lower_bound_only=lower_bound_only,
            relative_error=relative_error,
            max_relative_error=max_relative,
            boxes=count,
            terms=rows if keep_terms else None,
        )

    def evaluate(
        self, f: Callable, exponents: FormExponents, keep_terms: bool = False
    ) -> SparseFormResult:
        return self.summarize(self.level_terms(f, exponents), keep_terms=keep_terms)


def _rows(level_terms: LevelTerms, mask: np.ndarray) -> List[SparseTerm]:
    return [
        SparseTerm(
            grid=level_terms.grid_id,
            level=level_terms.level,
            left=float(level_terms.lefts[k]),
            mu_term=float(level_terms.mu_term[k]),
            measure_term=float(level_terms.measure_term),
            avg1=float(level_terms.avg1[k]),
            avg2=float(level_terms.avg2[k]),
            summand=float(level_terms.summand[k]),
        )
        for k in np.flatnonzero(mask)
    ]


def gamma_average(
    f: Callable,
    region: Region,
    gamma: float,
    alpha: float,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """(1/A_alpha(E) * integral over E of |f|^gamma dA_alpha)^(1/gamma)."""
    if gamma < 1.0:
        raise ValueError(f"gamma must be at least 1, got {gamma}")
    measure = measure_alpha(region, alpha)
    if not measure > 0.0:
        raise ValueError("region has zero measure")
    magnitude = magnitude_of(f)
    integral = integrate_region_box(
        lambda z: magnitude(z) ** gamma, region, alpha, spec or QuadratureSpec()
    )
    return (max(integral.value, 0.0) / measure) ** (1.0 / gamma)


def sparse_form(
    f: Callable,
    u: SymbolExpression,
    phi: SymbolExpression,
    params: SparseFormParams,
    alpha: float,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
    keep_terms: bool = False,
    evaluator: Optional[SparseEvaluator] = None,
) -> SparseFormResult:
    """
    Sum of mu(Q)^{1/gamma'} A(Q)^{q/(p gamma)} <|f|^N>_Q <|f|^{q-N}>_{Q,gamma} over the boxes.

    Args:
        f: Vectorised function on the half-plane
        u: Multiplier symbol
        phi: Composition symbol
        params: N, gamma, p, q
        alpha: Weight exponent
        collections: Truncated collections, normally one per grid
        spec: Tolerances for the lower-bound flag
        keep_terms: Keep every summand for a CSV dump
        evaluator: Reuse box tables and the pullback measure across calls

    Returns:
        The truncated sum
    """
    evaluator = evaluator or SparseEvaluator(collections, alpha, u, phi, params.q, spec)
    exponents = FormExponents(
        first_power=float(params.N),
        second_power=params.second_power,
        gamma=params.gamma,
        mu_exponent=params.mu_exponent,
        measure_exponent=params.measure_exponent,
    )
    result = evaluator.evaluate(f, exponents, keep_terms)
    logger.debug(f"Sparse form (N={params.N}, gamma={params.gamma:g}): {result.value:.10g}")
    return result


def unweighted_sparse_form(
    f: Callable,
    N: int,
    q: float,
    alpha: float,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
    keep_terms: bool = False,
    evaluator: Optional[SparseEvaluator] = None,
) -> SparseFormResult:
    """Sum of A(Q) <|f|^N>_Q <|f|^{q-N}>_Q; the caller takes the infimum over N."""
    if not 1 <= N <= q:
        raise ScenarioValidationError(f"N must satisfy 1 <= N <= q, got N={N}, q={q}")
    evaluator = evaluator or SparseEvaluator(collections, alpha, spec=spec)
    exponents = FormExponents(first_power=float(N), second_power=q - N)
    return evaluator.evaluate(f, exponents, keep_terms)


def fractional_sparse_form(
    f: Callable,
    N: int,
    p: float,
    q: float,
    alpha: float,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
    keep_terms: bool = False,
    evaluator: Optional[SparseEvaluator] = None,
) -> SparseFormResult:
    """Sum of A(Q)^{q/p} <|f|^N>_Q <|f|^{q-N}>_Q for N with N < p < q < p + N."""
    window = ExponentWindow(p=p, q=q).require()
    if N not in window:
        raise ScenarioValidationError(
            f"N={N} is not admissible for p={p}, q={q}; use one of {window}"
        )
    evaluator = evaluator or SparseEvaluator(collections, alpha, spec=spec)
    exponents = FormExponents(first_power=float(N), second_power=q - N, measure_exponent=q / p)
    return evaluator.evaluate(f, exponents, keep_terms)


class SplitInfimum(BaseModel):
    """A sparse form at every admissible split N and the smallest value."""

    values: Dict[int, float]
    best_N: int
    minimum: float


def infimum_over_splits(
    f: Callable,
    p: float,
    q: float,
    alpha: float,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
) -> SplitInfimum:
    """
    The unweighted form for N = 1..floor(q) when p = q, the fractional form
    over the admissible N when p < q.
    """
    evaluator = SparseEvaluator(collections, alpha, spec=spec)
    values: Dict[int, float] = {}
    if p == q:
        for n in range(1, math.floor(q) + 1):
            values[n] = unweighted_sparse_form(
                f, n, q, alpha, collections, evaluator=evaluator
            ).value
    else:
        for n in ExponentWindow(p=p, q=q).require():
            values[n] = fractional_sparse_form(
                f, n, p, q, alpha, collections, evaluator=evaluator
            ).value
    best = min(values, key=lambda n: (values[n], n))
    return SplitInfimum(values=values, best_N=best, minimum=values[best])
