"""Worst-case hashing laboratory.

Exact ideality counts and probabilities, closed-form bounds on minimal
ideal-family sizes, verified family constructions, Monte Carlo estimates,
and the advice-bit consequences, behind one CLI (`idealhash`).
"""

from .combinatorics import LogReal, StirlingBracket, binom, composition_count, stirling_bracket
from .hashspace import (
    Decomposition,
    Family,
    HashFunction,
    KeySet,
    LoadProfile,
    Params,
    all_key_sets,
    balanced_fiber_sizes,
    balanced_functions,
    blocked_function,
    family_cost,
    is_c_ideal,
    load_profile,
)
from .oracle import (
    CoverageReport,
    IdealCount,
    balance_extremality_check,
    count_ideal_sets,
    exact_ideal_probability,
    min_family_size_exact,
    verify_family,
)

__all__ = [
    "LogReal",
    "StirlingBracket",
    "binom",
    "composition_count",
    "stirling_bracket",
    "Decomposition",
    "Family",
    "HashFunction",
    "KeySet",
    "LoadProfile",
    "Params",
    "all_key_sets",
    "balanced_fiber_sizes",
    "balanced_functions",
    "blocked_function",
    "family_cost",
    "is_c_ideal",
    "load_profile",
    "CoverageReport",
    "IdealCount",
    "balance_extremality_check",
    "count_ideal_sets",
    "exact_ideal_probability",
    "min_family_size_exact",
    "verify_family",
]

__version__ = "0.1.0"
