"""Seeded benchmark generators.

Coefficient distributions are plain uniform draws; the thresholds are chosen
so that instances are neither empty nor vacuous most of the time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Tuple

from ..formula import Comparator, Literal, PBConstraint, PBFormula, Term


@dataclass(frozen=True)
class GenSpec:
    family: str  # "knapsack", "auction" or "casestudy"
    n: int
    m: int = 1
    seed: int = 0
    coeff_range: Optional[Tuple[int, int]] = None
    # auction only: chance that an item matters to a participant at all
    density: float = 1.0
    # casestudy only: the right-hand side
    k: int = 10


KNAPSACK_RANGE = (1, 20)
AUCTION_RANGE = (-10, 10)


def gen_knapsack(spec: GenSpec) -> PBFormula:
    """``m`` capacity constraints ``sum_i w_ij x_i <= b_j`` over ``n`` items."""
    rng = random.Random(spec.seed)
    lo, hi = spec.coeff_range or KNAPSACK_RANGE
    if lo < 1:
        raise ValueError("knapsack weights must be positive")
    constraints = []
    for _ in range(spec.m):
        w = [rng.randint(lo, hi) for _ in range(spec.n)]
        b_lo = min(w)
        b = rng.randint(b_lo, max(b_lo, sum(w) // 2))
        terms = [Term(a, Literal(i + 1)) for i, a in enumerate(w)]
        constraints.append(PBConstraint(terms, Comparator.LE, b))
    return PBFormula(spec.n, constraints)


def gen_auction(spec: GenSpec) -> PBFormula:
    """``m`` participants, each needing ``sum_i u_ij x_i >= t_j`` over ``n`` items.

    ``x_i`` means item ``i`` is sold; utilities may be negative.
    """
    rng = random.Random(spec.seed)
    lo, hi = spec.coeff_range or AUCTION_RANGE
    constraints = []
    for _ in range(spec.m):
        terms = []
        for i in range(spec.n):
            if rng.random() >= spec.density:
                continue
            u = rng.randint(lo, hi)
            if u:
                terms.append(Term(u, Literal(i + 1)))
        low = sum(t.coeff for t in terms if t.coeff < 0)
        high = sum(t.coeff for t in terms if t.coeff > 0)
        t = rng.randint(low, high)
        constraints.append(PBConstraint(terms, Comparator.GE, t))
    return PBFormula(spec.n, constraints)


CASE_STUDY_COEFFS = ([2 ** i for i in range(13)]
                     + [3 ** i for i in range(1, 11)]
                     + [7 ** i for i in range(1, 8)])


def case_study_formula(k: int, unit_coefficients: bool = False) -> PBFormula:
    """One 30-variable ``>= k`` constraint with powers of 2, 3 and 7 as coefficients.

    With ``unit_coefficients`` every coefficient is 1 instead.
    """
    coeffs = [1] * 30 if unit_coefficients else CASE_STUDY_COEFFS
    terms = [Term(a, Literal(i + 1)) for i, a in enumerate(coeffs)]
    return PBFormula(30, [PBConstraint(terms, Comparator.GE, k)])


def generate(spec: GenSpec) -> PBFormula:
    if spec.family == "knapsack":
        return gen_knapsack(spec)
    if spec.family == "auction":
        return gen_auction(spec)
    if spec.family == "casestudy":
        return case_study_formula(spec.k, unit_coefficients=spec.coeff_range == (1, 1))
    raise ValueError(f"unknown family {spec.family!r}")
