"""Sparse forms, maximal operators, kernel domination and compactness tails."""

from .compactness import (
    CompactnessTailProfile,
    compactness_profile,
    compactness_tail,
    escaping_sequence,
)
from .domination import (
    CorpusRow,
    KernelDomination,
    KernelDominationScan,
    OperatorSparseTable,
    SparseDrift,
    default_corpus,
    kernel_domination_check,
    kernel_domination_scan,
    operator_power,
    operator_vs_sparse,
    sample_points,
    sparse_constant_drift,
)
from .forms import (
    FormExponents,
    SparseEvaluator,
    SparseFormResult,
    SparseTerm,
    SplitInfimum,
    fractional_sparse_form,
    gamma_average,
    infimum_over_splits,
    sparse_form,
    unweighted_sparse_form,
)
from .maximal import dyadic_maximal, fractional_maximal
from .params import ExhaustingFamily, ExponentWindow, SparseFormParams
from .tables import BoxTable, SlabTable

__all__ = [
    "BoxTable",
    "CompactnessTailProfile",
    "CorpusRow",
    "ExhaustingFamily",
    "ExponentWindow",
    "FormExponents",
    "KernelDomination",
    "KernelDominationScan",
    "OperatorSparseTable",
    "SlabTable",
    "SparseDrift",
    "SparseEvaluator",
    "SparseFormParams",
    "SparseFormResult",
    "SparseTerm",
    "SplitInfimum",
    "compactness_profile",
    "compactness_tail",
    "default_corpus",
    "dyadic_maximal",
    "escaping_sequence",
    "fractional_maximal",
    "fractional_sparse_form",
    "gamma_average",
    "infimum_over_splits",
    "kernel_domination_check",
    "kernel_domination_scan",
    "operator_power",
    "operator_vs_sparse",
    "sample_points",
    "sparse_constant_drift",
    "sparse_form",
    "unweighted_sparse_form",
]
