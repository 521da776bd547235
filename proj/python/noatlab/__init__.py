"""Python bindings for the noatlab C++ core.

Reports come back as plain dicts with the same keys as the CLI's JSON output.
"""

from ._core import (
    certify,
    epsilon0,
    funny_word_search,
    gnoat_constants,
    measure,
    non_at_bound,
    orthant_mc,
    rudin_shapiro_signs,
    sample_names,
    sbh_polynomial,
    system_correlations,
)

__all__ = [
    "certify",
    "epsilon0",
    "funny_word_search",
    "gnoat_constants",
    "measure",
    "non_at_bound",
    "orthant_mc",
    "rudin_shapiro_signs",
    "sample_names",
    "sbh_polynomial",
    "system_correlations",
]
