"""
Numerical checks of sparse domination: the pointwise kernel bound and the
operator norm against the sparse form over a function corpus.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..carleson.testfunctions import CorpusFunction, LinearCombination, TestFunction
from ..carleson.testing import integrate_pullback, is_zero, pullback_focus
from ..geometry import CarlesonBox, HalfPlanePoint, TruncatedBoxCollection
from ..quadrature import (
    IntegralEstimate,
    QuadratureSpec,
    affine_preimage,
    integrate_region,
    integrate_region_box,
    measure_alpha,
    pullback_measure,
)
from ..symbols import SymbolExpression
from ..tools.utils import parallel_map
from .forms import SparseEvaluator, magnitude_of, sparse_form
from .params import SparseFormParams

logger = logging.getLogger(__name__)


class KernelDomination(BaseModel):
    """Both sides of the pointwise kernel bound at one point zeta."""

    zeta: Tuple[float, float]
    lhs: float
    rhs: float
    ratio: Optional[float] = Field(None, description="lhs / rhs; None when rhs vanishes")
    boxes: int
    converged: bool


class KernelDominationScan(BaseModel):
    results: List[KernelDomination]
    max_ratio: float
    min_ratio: float
    spread: float = Field(..., description="max_ratio / min_ratio")


class CorpusRow(BaseModel):
    function: str
    lhs: float
    lhs_error: float
    rhs: float
    ratio: Optional[float]
    lower_bound_only: bool


class OperatorSparseTable(BaseModel):
    """||W f||^q against the sparse form over a corpus; max ratio is the empirical constant."""

    rows: List[CorpusRow]
    max_ratio: float
    min_ratio: float
    spread: float


class SparseDrift(BaseModel):
    base: OperatorSparseTable
    widened: OperatorSparseTable
    drift: float = Field(..., description="Relative change of the max ratio")


def _truncation(collections: Sequence[TruncatedBoxCollection]) -> Tuple[float, float, float, float]:
    x0 = min(float(c.window.left) for c in collections)
    x1 = max(float(c.window.right) for c in collections)
    y1 = max(2.0**c.level_max for c in collections)
    return x0, x1, 0.0, y1


def kernel_domination_check(
    f: Callable,
    u: SymbolExpression,
    phi: SymbolExpression,
    q: float,
    N: int,
    gamma: float,
    alpha: float,
    zeta: HalfPlanePoint,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
    p: Optional[float] = None,
) -> KernelDomination:
    """
    Compare the kernel integral at zeta with the sparse sum over boxes containing zeta.

    The left side is the integral of |f|^{q-N} / |conj(zeta) - z|^{alpha+2}
    against mu_{u,phi,q,alpha}, restricted to images inside the window times
    (0, 2^level_max). The right side sums
    mu(Q)^{1/gamma'} A(Q)^{(q/p - 1)/gamma - 1} (integral over Q of |f|^{gamma(q-N)})^{1/gamma}
    over the boxes of every collection that contain zeta.

    Args:
        f: Vectorised function
        u: Multiplier symbol
        phi: Composition symbol
        q: Target exponent
        N: Split, 1 <= N <= q
        gamma: Average exponent
        alpha: Weight exponent
        zeta: The kernel point, inside the truncation
        collections: Truncated collections
        spec: Quadrature settings
        p: Source exponent, q by default

    Returns:
        Both sides and their ratio
    """
    spec = spec or QuadratureSpec()
    p = q if p is None else p
    if not 1 <= N <= q or gamma < 1.0:
        raise ValueError(f"need 1 <= N <= q and gamma >= 1, got N={N}, q={q}, gamma={gamma}")
    magnitude = magnitude_of(f)
    power = q - N
    order = alpha + 2.0
    conjugate = zeta.conjugate
    bounds = _truncation(collections)

    if is_zero(u):
        lhs = IntegralEstimate.exact(0.0)
    else:
        preimage = affine_preimage(phi, bounds)

        def integrand(w: np.ndarray) -> np.ndarray:
            image = phi.evaluate(w)
            value = (
                magnitude(image) ** power
                * np.abs(u.evaluate(w)) ** q
                / np.abs(conjugate - image) ** order
            )
            if preimage is not None:
                return value
            x0, x1, y0, y1 = bounds
            inside = (image.real >= x0) & (image.real < x1) & (image.imag < y1)
            return np.where(inside, value, 0.0)

        x0, x1, y0, y1 = preimage if preimage is not None else bounds
        focus, scale = pullback_focus(phi, zeta)
        lhs = integrate_region(
            integrand,
            x0,
            x1,
            y0,
            y1,
            alpha,
            spec,
            x_breaks=[focus - scale, focus, focus + scale],
            y_breaks=[scale],
        )

    terms = []
    converged = lhs.converged
    for collection in collections:
        grid = collection.grid
        for level, index in collection.boxes_containing(zeta.x, zeta.y):
            box = CarlesonBox(grid.interval(level, index))
            integral = integrate_region_box(
                lambda z: magnitude(z) ** (gamma * power), box, alpha, spec
            )
            converged &= integral.converged
            measure = measure_alpha(box, alpha)
            term = measure ** ((q / p - 1.0) / gamma - 1.0)
            term *= max(integral.value, 0.0) ** (1.0 / gamma)
            if gamma > 1.0:
                mu = pullback_measure(box, u, phi, q, alpha, spec)
                converged &= mu.converged
                term *= max(mu.value, 0.0) ** (1.0 - 1.0 / gamma)
            terms.append(term)
    rhs = math.fsum(terms)
    ratio = lhs.value / rhs if rhs > 0.0 else None
    return KernelDomination(
        zeta=(zeta.x, zeta.y),
        lhs=lhs.value,
        rhs=rhs,
        ratio=ratio,
        boxes=len(terms),
        converged=converged,
    )


def sample_points(
    count: int, collections: Sequence[TruncatedBoxCollection], seed: int = 0
) -> List[HalfPlanePoint]:
    """Points with x uniform in the middle half of the window and y log-uniform between levels."""
    rng = np.random.default_rng(seed)
    x0, x1, _, _ = _truncation(collections)
    level_min = max(c.level_min for c in collections)
    level_max = min(c.level_max for c in collections)
    half = 0.25 * (x1 - x0)
    center = 0.5 * (x0 + x1)
    xs = rng.uniform(center - half, center + half, count)
    ys = 2.0 ** rng.uniform(level_min + 1, level_max - 1, count)
    return [HalfPlanePoint(x, y) for x, y in zip(xs, ys)]


def kernel_domination_scan(
    f: Callable,
    u: SymbolExpression,
    phi: SymbolExpression,
    q: float,
    N: int,
    gamma: float,
    alpha: float,
    zetas: Sequence[HalfPlanePoint],
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
    p: Optional[float] = None,
) -> KernelDominationScan:
    """The kernel bound at many points; the spread measures uniformity of the constant."""
    results = parallel_map(
        lambda zeta: kernel_domination_check(
            f, u, phi, q, N, gamma, alpha, zeta, collections, spec, p
        ),
        zetas,
    )
    ratios = [r.ratio for r in results if r.ratio is not None]
    max_ratio = max(ratios, default=0.0)
    min_ratio = min(ratios, default=0.0)
    return KernelDominationScan(
        results=results,
        max_ratio=max_ratio,
        min_ratio=min_ratio,
        spread=max_ratio / min_ratio if min_ratio > 0.0 else math.inf,
    )


def default_corpus(t: float, alpha: float) -> List[CorpusFunction]:
    """Nine test functions f_{a,t} and three linear combinations of them."""
    apexes = [1j, 2j, 0.5j, 1 + 1j, -1 + 1j, 3 + 2j, 0.25j, 4j, -2 + 0.5j]
    singles = [TestFunction.at(a, t, alpha) for a in apexes]
    combinations = [
        LinearCombination(((1.0, singles[0]), (1.0, singles[1]))),
        LinearCombination(((1.0, singles[0]), (-0.5, singles[3]))),
        LinearCombination(((1.0, singles[2]), (1j, singles[4]))),
    ]
    return singles + combinations


def _anchor(f: CorpusFunction) -> HalfPlanePoint:
    if isinstance(f, TestFunction):
        return f.apex
    return HalfPlanePoint(f.focus, f.scale)


def operator_power(
    f: CorpusFunction,
    u: SymbolExpression,
    phi: SymbolExpression,
    q: float,
    alpha: float,
    spec: QuadratureSpec,
) -> IntegralEstimate:
    """||u (f o phi)||_{q,alpha}^q."""
    if is_zero(u):
        return IntegralEstimate.exact(0.0)
    focus, scale = pullback_focus(phi, _anchor(f))
    return integrate_pullback(
        lambda z: np.abs(u.evaluate(z)) ** q * f.abs_power(phi.evaluate(z), q),
        u,
        phi,
        f.decay(q),
        alpha,
        spec.around(focus, scale),
        focus,
        scale,
    )


def operator_vs_sparse(
    corpus: Optional[Sequence[CorpusFunction]],
    u: SymbolExpression,
    phi: SymbolExpression,
    p: float,
    q: float,
    alpha: float,
    params: SparseFormParams,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
) -> OperatorSparseTable:
    """
    ||W_{u,phi} f||_{q,alpha}^q and the sparse form of f for every corpus function.

    Args:
        corpus: Test functions and combinations (default: twelve functions in A^p)
        u: Multiplier symbol
        phi: Composition symbol
        p: Source exponent
        q: Target exponent
        alpha: Weight exponent
        params: Sparse form exponents
        collections: Truncated collections
        spec: Quadrature settings

    Returns:
        One row per function; the largest ratio is the scenario's empirical constant
    """
    spec = spec or QuadratureSpec()
    corpus = list(corpus) if corpus is not None else default_corpus(p, alpha)
    lhs = parallel_map(lambda f: operator_power(f, u, phi, q, alpha, spec), corpus)
    evaluator = SparseEvaluator(collections, alpha, u, phi, params.q, spec)
    rows = []
    for f, left in zip(corpus, lhs):
        right = sparse_form(f, u, phi, params, alpha, collections, spec, evaluator=evaluator)
        rows.append(
            CorpusRow(
                function=str(f),
                lhs=left.value,
                lhs_error=left.error_bound,
                rhs=right.value,
                ratio=left.value / right.value if right.value > 0.0 else None,
                lower_bound_only=right.lower_bound_only or not left.converged,
            )
        )
    ratios = [row.ratio for row in rows if row.ratio is not None]
    max_ratio = max(ratios, default=0.0)
    min_ratio = min(ratios, default=0.0)
    logger.info(
        f"Operator/sparse ratio over {len(rows)} functions: {min_ratio:.4g}..{max_ratio:.4g}"
    )
    return OperatorSparseTable(
        rows=rows,
        max_ratio=max_ratio,
        min_ratio=min_ratio,
        spread=max_ratio / min_ratio if min_ratio > 0.0 else math.inf,
    )


def sparse_constant_drift(
    corpus: Optional[Sequence[CorpusFunction]],
    u: SymbolExpression,
    phi: SymbolExpression,
    p: float,
    q: float,
    alpha: float,
    params: SparseFormParams,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
) -> SparseDrift:
    """The empirical constant before and after doubling every window."""
    base = operator_vs_sparse(corpus, u, phi, p, q, alpha, params, collections, spec)
    wider = [collection.widened() for collection in collections]
    widened = operator_vs_sparse(corpus, u, phi, p, q, alpha, params, wider, spec)
    drift = (
        abs(widened.max_ratio - base.max_ratio) / base.max_ratio
        if base.max_ratio > 0.0
        else 0.0
    )
    logger.info(f"Sparse constant drift under window doubling: {drift:.3%}")
    return SparseDrift(base=base, widened=widened, drift=drift)
