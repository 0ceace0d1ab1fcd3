"""Independent counting oracles: exhaustive enumeration and meet-in-the-middle."""

from __future__ import annotations

import itertools
from bisect import bisect_left
from collections import Counter
from fractions import Fraction
from typing import Optional

import numpy as np

from ..formula import Comparator, Literal, PBConstraint, PBFormula, WeightFunction, normalize

MAX_BRUTE_FORCE_VARS = 26
MAX_MITM_TERMS = 40
_CHUNK_BITS = 18
_INT64_SAFE = 2 ** 62


class OracleLimitError(ValueError):
    pass


def _fits_int64(g: PBFormula) -> bool:
    for c in g.constraints:
        if sum(abs(t.coeff) for t in c.terms) + abs(c.k) >= _INT64_SAFE:
            return False
    return True


def _satisfying_masks(g: PBFormula):
    """Yield (first assignment index, bool mask) chunks; bit i-1 of the index is x_i."""
    n = g.num_vars
    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, start + chunk, dtype=np.int64)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int64)
        ok = np.ones(chunk, dtype=bool)
        for c in g.constraints:
            lhs = np.zeros(chunk, dtype=np.int64)
            for t in c.terms:
                col = bits[:, t.variable - 1]
                if t.literal.negated:
                    col = 1 - col
                lhs += t.coeff * col
            if c.comparator is Comparator.GE:
                ok &= lhs >= c.k
            elif c.comparator is Comparator.EQ:
                ok &= lhs == c.k
            else:
                ok &= lhs <= c.k
        yield start, ok


def _assignment(index: int, n: int):
    return {v: bool(index >> (v - 1) & 1) for v in range(1, n + 1)}


def brute_force_count(g: PBFormula, weights: Optional[WeightFunction] = None):
    """Sum over all 2^n assignments of [g holds] times the product of literal weights."""
    n = g.num_vars
    if n > MAX_BRUTE_FORCE_VARS:
        raise OracleLimitError(f"{n} variables exceeds the enumeration guard "
                               f"({MAX_BRUTE_FORCE_VARS})")
    weighted = weights is not None and not weights.is_unit()
    if _fits_int64(g):
        indices = ((start, ok) for start, ok in _satisfying_masks(g))
        if not weighted:
            return sum(int(ok.sum()) for _, ok in indices)
        sat = (start + int(i) for start, ok in indices for i in np.flatnonzero(ok))
    else:
        sat = (i for i in range(1 << n)
               if all(c.evaluate(_assignment(i, n)) for c in g.constraints))
        if not weighted:
            return sum(1 for _ in sat)
    total = Fraction(0)
    pos = [weights(Literal(v)) for v in range(1, n + 1)]
    neg = [weights(Literal(v, True)) for v in range(1, n + 1)]
    for i in sat:
        w = Fraction(1)
        for v in range(n):
            w *= pos[v] if i >> v & 1 else neg[v]
        total += w
    return total.numerator if total.denominator == 1 else total


def _half_sums(coeffs) -> Counter:
    sums = Counter({0: 1})
    for a in coeffs:
        nxt = Counter(sums)
        for s, cnt in sums.items():
            nxt[s + a] += cnt
        sums = nxt
    return sums


def mitm_count_single_constraint(c: PBConstraint, num_vars: int) -> int:
    """Models of one constraint over ``num_vars`` variables by meet-in-the-middle."""
    c = normalize(c)
    n = len(c.terms)
    if n > MAX_MITM_TERMS:
        raise OracleLimitError(f"{n} terms exceeds the meet-in-the-middle guard")
    free = num_vars - len(c.variables)
    if free < 0:
        raise ValueError("constraint mentions more variables than num_vars")
    coeffs = [t.coeff for t in c.terms]
    left = _half_sums(coeffs[: n // 2])
    right = _half_sums(coeffs[n // 2:])
    if c.comparator is Comparator.EQ:
        hits = sum(cnt * right.get(c.k - s, 0) for s, cnt in left.items())
    else:
        keys = sorted(right)
        suffix = list(itertools.accumulate(right[s] for s in reversed(keys)))[::-1] + [0]
        hits = 0
        for s, cnt in left.items():
            hits += cnt * suffix[bisect_left(keys, c.k - s)]
    return hits << free


def mitm_count(g: PBFormula) -> int:
    if len(g.constraints) != 1:
        raise ValueError("meet-in-the-middle oracle handles exactly one constraint")
    return mitm_count_single_constraint(g.constraints[0], g.num_vars)
