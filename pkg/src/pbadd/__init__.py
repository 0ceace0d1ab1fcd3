"""Exact model counting for pseudo-Boolean formulas with algebraic decision diagrams."""

from .add import ADD, AddManager, ADDError
from .compile import CompileMode, compile_constraint
from .count import ClusterStrategy, CountConfig, CountResult, count_formula
from .formula import (Comparator, Literal, PBConstraint, PBFormula, Term, WeightFunction,
                      parse_opb, parse_weights, render_opb)

__all__ = [
    "ADD", "AddManager", "ADDError", "CompileMode", "compile_constraint", "ClusterStrategy",
    "CountConfig", "CountResult", "count_formula", "Comparator", "Literal", "PBConstraint",
    "PBFormula", "Term", "WeightFunction", "parse_opb", "parse_weights", "render_opb",
]
__version__ = "0.1.0"
