"""
Help texts for the certificate commands.

This module provides the descriptions shown by ``--help`` for every
subcommand of the command line tool.
"""


def check_bounded_description() -> str:
    """Description of the boundedness certificate."""
    return """
    Certify boundedness of W_{u,phi}: A^p_alpha -> A^q_alpha.

    Evaluates the testing integral of f_{a,p} over the apex lattice, refines
    the lattice and reports the supremum with its refinement stability. When
    exponents.betas is set, every beta in [p, q] gets its own certificate.
    """


def check_compact_description() -> str:
    """Description of the compactness certificate."""
    return """
    Certify compactness of W_{u,phi} through the vanishing testing condition.

    Follows the testing integral along apexes escaping to the boundary,
    upward and tangentially. With compactness.sparse_tail the sparse tail
    functional over the exhausting family K_n is reported as well.
    """


def sparse_bound_description() -> str:
    """Description of the sparse domination check."""
    return """
    Compare ||W_{u,phi} f||^q_{q,alpha} with the sparse form over a corpus.

    Reports the ratio per corpus function on the truncated three-grid
    collection and, unless disabled, its drift when the truncation doubles.
    """


def weight_class_description() -> str:
    """Description of the weight class certificate."""
    return """
    Estimate the class constant of omega for (u, phi, alpha, q).

    Takes the supremum of the class integral over the zeta lattice with a
    refinement stability check, and samples omega(T_{iy}) / A_alpha(T_{iy})
    as y decreases to decide whether omega dA_alpha is 1-Carleson.
    """


def weighted_estimate_description() -> str:
    """Description of the weighted estimate check."""
    return """
    Check the weighted estimate for W_{u,phi} against [omega^{s'}]^{1/s'}.

    Computes the class constant of omega^{s'} and compares both sides of the
    weighted estimate over a corpus of test functions.
    """


def selftest_description() -> str:
    """Description of the oracle suite."""
    return """
    Run the closed-form oracle suite: box measures, the sparse ratio, the
    three-grid cover, test-function norms, the translation testing value and
    the reproducing constant. Needs no scenario.
    """


def run_description() -> str:
    """Description of the scenario runner."""
    return """
    Run every certificate listed in the scenario's certificates entry and
    write one report.
    """
