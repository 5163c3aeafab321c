"""B-weights: class constants, Carleson profiles and the weighted estimate."""

from .classes import (
    CarlesonRatioProfile,
    ClassVerdict,
    WeightCertificate,
    b_class_constant,
    b_class_value,
    carleson_ratio_profile,
    weight_measure,
)
from .estimates import (
    WeightedCarlesonProfile,
    WeightedEstimateTable,
    WeightedRow,
    weighted_carleson_profile,
    weighted_corpus,
    weighted_estimate_check,
    weighted_operator_power,
    weighted_pullback_measure,
    weighted_sparse_form,
)
from .params import BWeightParams, conjugate

__all__ = [
    "BWeightParams",
    "CarlesonRatioProfile",
    "ClassVerdict",
    "WeightCertificate",
    "WeightedCarlesonProfile",
    "WeightedEstimateTable",
    "WeightedRow",
    "b_class_constant",
    "b_class_value",
    "carleson_ratio_profile",
    "conjugate",
    "weight_measure",
    "weighted_carleson_profile",
    "weighted_corpus",
    "weighted_estimate_check",
    "weighted_operator_power",
    "weighted_pullback_measure",
    "weighted_sparse_form",
]
