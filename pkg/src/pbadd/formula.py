"""Pseudo-Boolean formulas: types, OPB/weights I/O, and simple rewrites.

A constraint is ``sum(a_i * l_i) <op> k`` where each ``l_i`` is a literal over a
Boolean variable ``x_i`` (1-based) and ``<op>`` is one of ``>=``, ``=``, ``<=``.
Coefficients and constants are Python ints, so there is no width limit.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

Assignment = Dict[int, bool]


class OPBParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class WeightParseError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Literal:
    variable: int
    negated: bool = False

    def __post_init__(self):
        if self.variable < 1:
            raise ValueError(f"variable index must be >= 1, got {self.variable}")

    def __invert__(self) -> Literal:
        return Literal(self.variable, not self.negated)

    def value(self, var_value: bool) -> bool:
        return var_value != self.negated

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        """DIMACS-style signed integer: ``-3`` is the negation of ``x3``."""
        if lit == 0:
            raise ValueError("literal 0 is not allowed")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.variable if self.negated else self.variable

    def __str__(self):
        return ("~x" if self.negated else "x") + str(self.variable)


@dataclass(frozen=True)
class Term:
    coeff: int
    literal: Literal

    @property
    def variable(self) -> int:
        return self.literal.variable

    def __str__(self):
        return f"{self.coeff:+d} {self.literal}"


class Comparator(enum.Enum):
    GE = ">="
    EQ = "="
    LE = "<="

    def holds(self, lhs: int, k: int) -> bool:
        if self is Comparator.GE:
            return lhs >= k
        if self is Comparator.EQ:
            return lhs == k
        return lhs <= k


@dataclass(frozen=True)
class PBConstraint:
    terms: Tuple[Term, ...]
    comparator: Comparator
    k: int

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def eq(self) -> bool:
        return self.comparator is Comparator.EQ

    @property
    def variables(self) -> frozenset:
        return frozenset(t.variable for t in self.terms)

    def lhs_range(self) -> Tuple[int, int]:
        """Smallest and largest achievable value of the left-hand side."""
        lo = sum(t.coeff for t in self.terms if t.coeff < 0)
        hi = sum(t.coeff for t in self.terms if t.coeff > 0)
        return lo, hi

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        lhs = 0
        for t in self.terms:
            if t.literal.value(assignment[t.variable]):
                lhs += t.coeff
        return self.comparator.holds(lhs, self.k)

    def is_false_marker(self) -> bool:
        return not self.terms and not self.comparator.holds(0, self.k)

    def is_trivially_true(self) -> bool:
        lo, hi = self.lhs_range()
        if self.comparator is Comparator.GE:
            return lo >= self.k
        if self.comparator is Comparator.LE:
            return hi <= self.k
        return lo == hi == self.k

    def is_trivially_false(self) -> bool:
        lo, hi = self.lhs_range()
        if self.comparator is Comparator.GE:
            return hi < self.k
        if self.comparator is Comparator.LE:
            return lo > self.k
        return self.k < lo or self.k > hi

    def __str__(self):
        lhs = " ".join(str(t) for t in self.terms) or "0"
        return f"{lhs} {self.comparator.value} {self.k}"


@dataclass(frozen=True)
class PBFormula:
    num_vars: int
    constraints: Tuple[PBConstraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            for t in c.terms:
                if t.variable > self.num_vars:
                    raise ValueError(
                        f"variable x{t.variable} exceeds declared count {self.num_vars}")

    @property
    def variables(self) -> frozenset:
        """Variables that occur in at least one constraint."""
        out = set()
        for c in self.constraints:
            out.update(c.variables)
        return frozenset(out)


FALSE_CONSTRAINT = PBConstraint((), Comparator.GE, 1)


@dataclass
class WeightFunction:
    """Literal weights; literals without an entry weigh 1."""

    weights: Dict[Literal, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for lit, w in self.weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} for {lit}")
            self.weights[lit] = w

    def __call__(self, lit: Literal) -> Fraction:
        return self.weights.get(lit, Fraction(1))

    def is_unit(self) -> bool:
        return all(w == 1 for w in self.weights.values())


# ---------------------------------------------------------------------------
# OPB input/output

_HEADER_RE = re.compile(r"#variable=\s*(\d+)(?:\s+#constraint=\s*(\d+))?")
_COEFF_RE = re.compile(r"^[+-]?\d+$")
_VAR_RE = re.compile(r"^(~?)x(\d+)$")
_COMPARATORS = {c.value: c for c in Comparator}


def _merge_terms(pairs: Iterable[Tuple[int, Literal]]) -> Tuple[Tuple[Term, ...], int]:
    # A duplicate may use the opposite polarity: a*~x == a - a*x.
    coeffs: Dict[int, int] = {}
    polarity: Dict[int, bool] = {}
    shift = 0
    for a, lit in pairs:
        v = lit.variable
        if v not in coeffs:
            coeffs[v] = a
            polarity[v] = lit.negated
        elif polarity[v] == lit.negated:
            coeffs[v] += a
        else:
            coeffs[v] -= a
            shift += a
    terms = tuple(Term(a, Literal(v, polarity[v])) for v, a in coeffs.items() if a != 0)
    return terms, shift


def _parse_constraint_body(body: str, lineno: int):
    tokens = body.split()
    op_idx = [i for i, tok in enumerate(tokens) if tok in _COMPARATORS]
    if len(op_idx) != 1:
        raise OPBParseError("expected exactly one of '>=', '=', '<='", lineno)
    i = op_idx[0]
    lhs, rhs = tokens[:i], tokens[i + 1:]
    if len(rhs) != 1 or not _COEFF_RE.match(rhs[0]):
        raise OPBParseError(f"bad right-hand side {' '.join(rhs)!r}", lineno)
    if len(lhs) % 2:
        raise OPBParseError("left-hand side must be coefficient/variable pairs", lineno)
    pairs = []
    for j in range(0, len(lhs), 2):
        a, x = lhs[j], lhs[j + 1]
        if not _COEFF_RE.match(a):
            raise OPBParseError(f"bad coefficient {a!r}", lineno)
        m = _VAR_RE.match(x)
        if not m:
            raise OPBParseError(f"bad variable {x!r}", lineno)
        var = int(m.group(2))
        if var < 1:
            raise OPBParseError(f"bad variable {x!r}", lineno)
        pairs.append((int(a), Literal(var, bool(m.group(1)))))
    return pairs, _COMPARATORS[tokens[i]], int(rhs[0])


def parse_opb(text: str) -> PBFormula:
    """Parse OPB text into a :class:`PBFormula`.

    Duplicate variables in one constraint are merged and zero coefficients are
    dropped.  Objective lines (``min:``) are ignored.
    """
    declared = None
    constraints = []
    max_var = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("*"):
            m = _HEADER_RE.search(line)
            if m and declared is None:
                declared = int(m.group(1))
            continue
        if line.startswith("min:") or line.startswith("max:"):
            continue
        if not line.endswith(";"):
            raise OPBParseError("missing terminating ';'", lineno)
        pairs, comp, k = _parse_constraint_body(line[:-1], lineno)
        for _, lit in pairs:
            if declared is not None and lit.variable > declared:
                raise OPBParseError(
                    f"variable x{lit.variable} exceeds #variable= {declared}", lineno)
            max_var = max(max_var, lit.variable)
        terms, shift = _merge_terms(pairs)
        constraints.append(PBConstraint(terms, comp, k - shift))
    return PBFormula(declared if declared is not None else max_var, constraints)


def render_opb(formula: PBFormula) -> str:
    """Deterministic OPB text; terms are written in variable-index order."""
    lines = [f"* #variable= {formula.num_vars} #constraint= {len(formula.constraints)}"]
    for c in formula.constraints:
        terms = sorted(c.terms, key=lambda t: t.variable)
        body = " ".join(f"{t.coeff:+d} {t.literal}" for t in terms)
        lines.append(f"{body} {c.comparator.value} {c.k} ;".lstrip())
    return "\n".join(lines) + "\n"


def parse_weights(text: str) -> WeightFunction:
    """Parse ``w <lit> <value>`` lines; ``<value>`` is ``p/q`` or a decimal."""
    weights: Dict[Literal, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "*", "#")):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "w":
            raise WeightParseError(f"line {lineno}: expected 'w <lit> <weight>'")
        try:
            lit = Literal.from_int(int(parts[1]))
        except ValueError:
            raise WeightParseError(f"line {lineno}: bad literal {parts[1]!r}") from None
        try:
            w = Fraction(parts[2])
        except (ValueError, ZeroDivisionError):
            raise WeightParseError(f"line {lineno}: malformed weight {parts[2]!r}") from None
        if w < 0:
            raise WeightParseError(f"line {lineno}: negative weight {parts[2]}")
        if lit in weights:
            raise WeightParseError(f"line {lineno}: duplicate entry for literal {parts[1]}")
        weights[lit] = w
    return WeightFunction(weights)


# ---------------------------------------------------------------------------
# rewrites

def normalize(c: PBConstraint) -> PBConstraint:
    """Turn ``<=`` into ``>=`` by negating both sides."""
    if c.comparator is not Comparator.LE:
        return c
    terms = tuple(Term(-t.coeff, t.literal) for t in c.terms)
    return PBConstraint(terms, Comparator.GE, -c.k)


def normalize_formula(g: PBFormula) -> PBFormula:
    return PBFormula(g.num_vars, [normalize(c) for c in g.constraints])


def flip_term_sign(c: PBConstraint, i: int) -> PBConstraint:
    """Rewrite term ``i`` as ``a*l = a - a*~l``; the satisfying set is unchanged."""
    if not 0 <= i < len(c.terms):
        raise IndexError(f"term index {i} out of range for {len(c.terms)} terms")
    t = c.terms[i]
    terms = list(c.terms)
    terms[i] = Term(-t.coeff, ~t.literal)
    return PBConstraint(terms, c.comparator, c.k - t.coeff)


def restrict_constraint(c: PBConstraint, a: Mapping[int, bool]) -> Optional[PBConstraint]:
    """Substitute ``a`` into ``c``.

    Returns None when the result is trivially satisfied and
    :data:`FALSE_CONSTRAINT` when it is trivially violated.  Constraints that
    mention no assigned variable are returned untouched.
    """
    if not any(t.variable in a for t in c.terms):
        return c
    k = c.k
    terms = []
    for t in c.terms:
        val = a.get(t.variable)
        if val is None:
            terms.append(t)
        elif t.literal.value(val):
            k -= t.coeff
    r = PBConstraint(terms, c.comparator, k)
    if r.is_trivially_true():
        return None
    if r.is_trivially_false():
        return FALSE_CONSTRAINT
    return r


def restrict_formula(g: PBFormula, a: Mapping[int, bool]) -> PBFormula:
    out = []
    for c in g.constraints:
        r = restrict_constraint(c, a)
        if r is not None:
            out.append(r)
    return PBFormula(g.num_vars, out)


def eval_formula(g: PBFormula, a: Mapping[int, bool]) -> bool:
    missing = [v for v in range(1, g.num_vars + 1) if v not in a]
    if missing:
        raise ValueError(f"assignment is partial; missing x{missing[0]}")
    return all(c.evaluate(a) for c in g.constraints)


def constraint(pairs: Sequence[Tuple[int, int]], comparator: str, k: int) -> PBConstraint:
    """Shorthand builder: ``constraint([(3, 1), (4, -2)], ">=", 3)`` is ``3x1 + 4~x2 >= 3``."""
    terms = [Term(a, Literal.from_int(v)) for a, v in pairs]
    return PBConstraint(terms, _COMPARATORS[comparator], k)
