"""Test functions, testing conditions and Carleson-measure certificates."""

from .certificates import (
    BoundednessCertificate,
    BoundednessSweep,
    CompactnessVerdict,
    LatticeValue,
    SequenceProfile,
    VanishingProfile,
    Verdict,
    boundedness_certificate,
    boundedness_sweep,
    vanishing_profile,
)
from .lattice import ApexLattice, escape_sequences
from .oracles import (
    dominance_constant,
    norm_constant,
    translation_intensity,
    translation_testing_value,
)
from .representation import (
    MeanValueCheck,
    ReproducingCheck,
    dilated_measure,
    mean_value_check,
    reproducing_check,
)
from .testfunctions import (
    CorpusFunction,
    LinearCombination,
    TestFunction,
    eval_test_function,
    test_function_norm,
)
from .testing import carleson_intensity, testing_condition_value

__all__ = [
    "ApexLattice",
    "BoundednessCertificate",
    "BoundednessSweep",
    "CompactnessVerdict",
    "CorpusFunction",
    "LatticeValue",
    "LinearCombination",
    "MeanValueCheck",
    "ReproducingCheck",
    "SequenceProfile",
    "TestFunction",
    "VanishingProfile",
    "Verdict",
    "boundedness_certificate",
    "boundedness_sweep",
    "carleson_intensity",
    "dilated_measure",
    "dominance_constant",
    "escape_sequences",
    "eval_test_function",
    "mean_value_check",
    "norm_constant",
    "reproducing_check",
    "test_function_norm",
    "testing_condition_value",
    "translation_intensity",
    "translation_testing_value",
    "vanishing_profile",
]
