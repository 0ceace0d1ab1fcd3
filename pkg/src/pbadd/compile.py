"""Compiling a single normalized PB constraint into a 0/1-leaf ADD.

Two constructions are provided.  Bottom-up sums term ADDs with Apply and then
thresholds the leaves.  Top-down branches on one term at a time with ITE and
stops as soon as the rest of the constraint is decided.  ``compile_dynamic``
picks one of the two per constraint from coefficient statistics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .add import ADD, AddManager
from .formula import Comparator, PBConstraint, Term, flip_term_sign

# thresholds of the dynamic heuristic
MAX_TOP_DOWN_LENGTH = 25
UNIQUE_COEFF_RATE = Fraction(9, 10)
UNIQUE_ADJ_DIFF_RATE = Fraction(85, 100)


class CompileError(ValueError):
    pass


class CompileMode(enum.Enum):
    BOTTOM_UP = "bottomup"
    TOP_DOWN = "topdown"
    DYNAMIC = "dynamic"


@dataclass
class CompileStats:
    mode: Optional[CompileMode] = None
    # calls the plain top-down recursion makes (memo hits expanded)
    calls: int = 0
    # subproblems actually evaluated
    evaluations: int = 0
    peak_nodes: int = 0


@dataclass(frozen=True)
class CoefficientStats:
    sorted_abs_coeffs: Tuple[int, ...]
    percentile25: int
    unique_coeff_rate: Fraction
    unique_adj_diff_rate: Fraction


def coefficient_stats(terms: Sequence[Term]) -> CoefficientStats:
    if not terms:
        raise CompileError("coefficient statistics need at least one term")
    given = [abs(t.coeff) for t in terms]
    coeffs = sorted(given)
    n = len(coeffs)
    p25 = coeffs[math.floor((n - 1) / 4)]
    ucr = Fraction(len(set(coeffs)), n)
    if n == 1:
        uadr = Fraction(1)
    else:
        # neighbours in the constraint's own term order
        diffs = {b - a for a, b in zip(given, given[1:])}
        uadr = Fraction(len(diffs), n - 1)
    return CoefficientStats(tuple(coeffs), p25, ucr, uadr)


def choose_mode(terms: Sequence[Term], k: int) -> CompileMode:
    if not terms:
        return CompileMode.BOTTOM_UP
    s = coefficient_stats(terms)
    below = k < s.percentile25
    cond1 = len(terms) <= MAX_TOP_DOWN_LENGTH and below
    cond2 = below and s.unique_coeff_rate >= UNIQUE_COEFF_RATE \
        and s.unique_adj_diff_rate >= UNIQUE_ADJ_DIFF_RATE
    return CompileMode.TOP_DOWN if cond1 or cond2 else CompileMode.BOTTOM_UP


# ---------------------------------------------------------------------------
# bottom-up

def expression_add(m: AddManager, terms: Sequence[Term],
                   stats: Optional[CompileStats] = None, track_nodes: bool = False) -> ADD:
    """ADD of ``sum(a_i * l_i)`` built by repeated Apply."""
    acc = m.constant(0)
    for t in terms:
        acc = m.apply("+", acc, m.apply("*", m.constant(t.coeff), m.literal(t.literal)))
        if stats is not None and track_nodes:
            stats.peak_nodes = max(stats.peak_nodes, m.node_count(acc))
    return acc


def compile_bottom_up(m: AddManager, terms: Sequence[Term], k: int, eq: bool,
                      stats: Optional[CompileStats] = None, track_nodes: bool = False) -> ADD:
    expr = expression_add(m, terms, stats, track_nodes)
    if eq:
        return m.map_leaves(expr, lambda v: 1 if v == k else 0)
    return m.map_leaves(expr, lambda v: 1 if v >= k else 0)


# ---------------------------------------------------------------------------
# top-down

def _check_top_down_order(terms: Sequence[Term]):
    seen_positive = False
    for t in terms:
        if t.coeff >= 0:
            seen_positive = True
        elif seen_positive:
            raise CompileError(
                "top-down compilation needs ascending coefficients or no negative ones")


def compile_top_down(m: AddManager, terms: Sequence[Term], k: int, eq: bool,
                     stats: Optional[CompileStats] = None, memo: bool = True) -> ADD:
    """ITE recursion over the terms in list order.

    With ``memo`` the subresult for each ``(index, k)`` pair is built once;
    ``stats.calls`` still reports how many calls the plain recursion makes.
    """
    _check_top_down_order(terms)
    if stats is None:
        stats = CompileStats()
    n = len(terms)
    coeffs = [t.coeff for t in terms]
    nonneg = [True] * (n + 1)
    rest = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        nonneg[i] = nonneg[i + 1] and coeffs[i] >= 0
        rest[i] = rest[i + 1] + coeffs[i]
    lits = [m.literal(t.literal).node for t in terms]
    zero, one = m._zero, m._one
    cache = {}

    def leaf_or_none(idx, k):
        if nonneg[idx]:
            if eq and k < 0:
                return zero
            if not eq and k <= 0:
                return one
        if idx == n:
            return one if eq and k == 0 else zero
        return None

    def plain(idx, k):
        stats.calls += 1
        stats.evaluations += 1
        r = leaf_or_none(idx, k)
        if r is not None:
            return r
        lo = plain(idx + 1, k)
        hi = plain(idx + 1, k - coeffs[idx])
        return m._ite(lits[idx], hi, lo)

    def memoized(idx, k):
        # returns (node, size of the plain recursion tree rooted here)
        r = leaf_or_none(idx, k)
        if r is not None:
            return r, 1
        if nonneg[idx] and k > rest[idx]:
            # no branch can reach k: every path runs to the end and yields 0
            return zero, 2 ** (n - idx + 1) - 1
        key = (idx, k)
        hit = cache.get(key)
        if hit is not None:
            return hit
        stats.evaluations += 1
        lo, c0 = memoized(idx + 1, k)
        hi, c1 = memoized(idx + 1, k - coeffs[idx])
        r = (m._ite(lits[idx], hi, lo), 1 + c0 + c1)
        cache[key] = r
        return r

    if n == 0:
        return ADD(m, one if (k == 0 if eq else k <= 0) else zero)
    if memo:
        lo, c0 = memoized(1, k)
        hi, c1 = memoized(1, k - coeffs[0])
        stats.calls += c0 + c1
    else:
        lo = plain(1, k)
        hi = plain(1, k - coeffs[0])
    return ADD(m, m._ite(lits[0], hi, lo))


# ---------------------------------------------------------------------------
# term rewrites and the dynamic selector

def _rewrite(c: PBConstraint, order: List[int], want_positive) -> PBConstraint:
    c = PBConstraint([c.terms[i] for i in order], c.comparator, c.k)
    for i, t in enumerate(c.terms):
        if (t.coeff > 0) != want_positive(i):
            c = flip_term_sign(c, i)
    return c


def alternate_signs(terms: Sequence[Term], k: int, eq: bool) -> PBConstraint:
    """Sort by |coeff| ascending, then make coefficients alternate +, -, +, ..."""
    c = PBConstraint(terms, Comparator.EQ if eq else Comparator.GE, k)
    order = sorted(range(len(terms)), key=lambda i: abs(terms[i].coeff))
    return _rewrite(c, order, lambda i: i % 2 == 0)


def all_positive_descending(terms: Sequence[Term], k: int, eq: bool) -> PBConstraint:
    """Make every coefficient positive, then sort descending."""
    c = PBConstraint(terms, Comparator.EQ if eq else Comparator.GE, k)
    c = _rewrite(c, list(range(len(terms))), lambda i: True)
    order = sorted(range(len(c.terms)), key=lambda i: -c.terms[i].coeff)
    return PBConstraint([c.terms[i] for i in order], c.comparator, c.k)


def optimize_compile_bottom_up(m: AddManager, terms: Sequence[Term], k: int, eq: bool,
                               stats: Optional[CompileStats] = None,
                               track_nodes: bool = False) -> ADD:
    c = alternate_signs(terms, k, eq)
    return compile_bottom_up(m, c.terms, c.k, eq, stats, track_nodes)


def optimize_compile_top_down(m: AddManager, terms: Sequence[Term], k: int, eq: bool,
                              stats: Optional[CompileStats] = None, memo: bool = True) -> ADD:
    c = all_positive_descending(terms, k, eq)
    return compile_top_down(m, c.terms, c.k, eq, stats, memo)


def compile_dynamic(m: AddManager, terms: Sequence[Term], k: int, eq: bool,
                    stats: Optional[CompileStats] = None, track_nodes: bool = False) -> ADD:
    mode = choose_mode(terms, k)
    if stats is not None:
        stats.mode = mode
    if mode is CompileMode.TOP_DOWN:
        return optimize_compile_top_down(m, terms, k, eq, stats)
    return optimize_compile_bottom_up(m, terms, k, eq, stats, track_nodes)


def compile_constraint(m: AddManager, c: PBConstraint, mode: CompileMode = CompileMode.DYNAMIC,
                       stats: Optional[CompileStats] = None, track_nodes: bool = False) -> ADD:
    """Compile a GE/EQ constraint; bottom-up and top-down use their optimized term order."""
    if c.comparator is Comparator.LE:
        raise CompileError("normalize <= constraints before compiling")
    if stats is None:
        stats = CompileStats()
    if mode is CompileMode.DYNAMIC:
        return compile_dynamic(m, c.terms, c.k, c.eq, stats, track_nodes)
    stats.mode = mode
    if mode is CompileMode.TOP_DOWN:
        return optimize_compile_top_down(m, c.terms, c.k, c.eq, stats)
    return optimize_compile_bottom_up(m, c.terms, c.k, c.eq, stats, track_nodes)
