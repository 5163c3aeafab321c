"""Integration against dA_alpha: closed-form measures and adaptive cubature."""

from .cells import cell_rule
from .engine import CartesianChart, Chart, PolarChart, adaptive_cubature
from .measures import (
    affine_preimage,
    bergman_norm,
    descendant_union_measure,
    half_sine_moment,
    integrate_disk,
    integrate_halfplane,
    integrate_halfplane_complex,
    integrate_region,
    integrate_region_box,
    measure_alpha,
    preimage_breaks,
    pullback_measure,
    rectangle_measure,
    sampled_decay_exponent,
)
from .models import ComplexEstimate, IntegralEstimate, QuadratureSpec, TailModel, WeightParameter

__all__ = [
    "CartesianChart",
    "Chart",
    "ComplexEstimate",
    "IntegralEstimate",
    "PolarChart",
    "QuadratureSpec",
    "TailModel",
    "WeightParameter",
    "adaptive_cubature",
    "affine_preimage",
    "bergman_norm",
    "cell_rule",
    "descendant_union_measure",
    "half_sine_moment",
    "integrate_disk",
    "integrate_halfplane",
    "integrate_halfplane_complex",
    "integrate_region",
    "integrate_region_box",
    "measure_alpha",
    "preimage_breaks",
    "pullback_measure",
    "rectangle_measure",
    "sampled_decay_exponent",
]
