"""Formula simplification: single-term inference, propagation, assumption probing."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

from .formula import Assignment, Comparator, PBConstraint, PBFormula, restrict_formula


class Inference(enum.Enum):
    FORCED = "forced"
    TAUTOLOGY = "tautology"
    CONTRADICTION = "contradiction"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class InferenceResult:
    kind: Inference
    variable: Optional[int] = None
    value: Optional[bool] = None


@dataclass
class PreprocessOutcome:
    reduced: PBFormula
    forced: Assignment = field(default_factory=dict)
    unsat: bool = False


def infer_decision(c: PBConstraint) -> InferenceResult:
    """Classify ``a*l (>=|=) k`` by trying both values of the literal."""
    if len(c.terms) != 1:
        raise ValueError("infer_decision needs a single-term constraint")
    if c.comparator is Comparator.LE:
        raise ValueError("normalize the constraint before inference")
    t = c.terms[0]
    when_false = c.comparator.holds(0, c.k)
    when_true = c.comparator.holds(t.coeff, c.k)
    if when_true and when_false:
        return InferenceResult(Inference.TAUTOLOGY)
    if not when_true and not when_false:
        return InferenceResult(Inference.CONTRADICTION)
    # the literal must take value `when_true`; translate to the variable
    return InferenceResult(Inference.FORCED, t.variable, when_true != t.literal.negated)


def propagate(g: PBFormula, a: Mapping[int, bool]) -> Optional[PBFormula]:
    """Restrict ``g`` by ``a``; None when a constraint becomes false."""
    r = restrict_formula(g, a) if a else g
    if any(c.is_false_marker() for c in r.constraints):
        return None
    return r


class _Conflict(Exception):
    pass


def _merge(into: Dict[int, bool], var: int, value: bool):
    if into.get(var, value) != value:
        raise _Conflict(var)
    into[var] = value


def _branch_inferences(g: PBFormula) -> Optional[Dict[int, bool]]:
    """Forced values from the single-term constraints of ``g``; None if ``g`` is refuted."""
    out: Dict[int, bool] = {}
    for c in g.constraints:
        if c.is_false_marker():
            return None
        if len(c.terms) != 1:
            continue
        res = infer_decision(c)
        if res.kind is Inference.CONTRADICTION:
            return None
        if res.kind is Inference.FORCED:
            try:
                _merge(out, res.variable, res.value)
            except _Conflict:
                return None
    return out


def assum_probe(g: PBFormula, x: int) -> Assignment:
    """Variables forced to the same value whether ``x`` is true or false.

    If exactly one branch is refuted, ``x`` itself is forced to the other
    value.  If both are refuted ``x`` is mapped to True, which the next
    propagation turns into a conflict.
    """
    if not 1 <= x <= g.num_vars:
        raise ValueError(f"x{x} is outside the formula's variables")
    pos = _branch_inferences(restrict_formula(g, {x: True}))
    neg = _branch_inferences(restrict_formula(g, {x: False}))
    if pos is None and neg is None:
        return {x: True}
    if pos is None:
        return {x: False}
    if neg is None:
        return {x: True}
    return {v: val for v, val in pos.items() if v != x and neg.get(v) == val}


def _single_term_pass(g: PBFormula, mapping: Dict[int, bool]) -> PBFormula:
    kept = []
    for c in g.constraints:
        if len(c.terms) == 1:
            res = infer_decision(c)
            if res.kind is Inference.CONTRADICTION:
                raise _Conflict(c.terms[0].variable)
            if res.kind is Inference.FORCED:
                _merge(mapping, res.variable, res.value)
            if res.kind is Inference.TAUTOLOGY:
                continue
        kept.append(c)
    return PBFormula(g.num_vars, kept)


def preprocess(g: PBFormula) -> PreprocessOutcome:
    """Alternate inference/propagation and probing/propagation until nothing changes.

    Forced variables never occur in the reduced formula, and the count of
    ``g`` equals the product of the forced literals' weights times the count
    of the reduced formula over the remaining variables.
    """
    forced: Dict[int, bool] = {}
    cur = g
    if any(c.is_false_marker() for c in cur.constraints):
        return PreprocessOutcome(cur, forced, True)
    try:
        while True:
            before = cur
            mapping: Dict[int, bool] = {}
            cur = _single_term_pass(cur, mapping)
            cur = _apply(cur, mapping, forced)
            probed: Dict[int, bool] = {}
            for x in sorted(cur.variables):
                for v, val in assum_probe(cur, x).items():
                    _merge(probed, v, val)
            cur = _apply(cur, probed, forced)
            if cur == before:
                break
    except _Conflict:
        return PreprocessOutcome(cur, forced, True)
    return PreprocessOutcome(cur, forced, False)


def _apply(g: PBFormula, mapping: Dict[int, bool], forced: Dict[int, bool]) -> PBFormula:
    for v, val in mapping.items():
        _merge(forced, v, val)
    r = propagate(g, mapping)
    if r is None:
        raise _Conflict(None)
    return r
