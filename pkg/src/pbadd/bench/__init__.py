from .generators import GenSpec, case_study_formula, gen_auction, gen_knapsack, generate
from .oracle import (OracleLimitError, brute_force_count, mitm_count,
                     mitm_count_single_constraint)

__all__ = [
    "GenSpec", "case_study_formula", "gen_auction", "gen_knapsack", "generate",
    "OracleLimitError", "brute_force_count", "mitm_count", "mitm_count_single_constraint",
]
