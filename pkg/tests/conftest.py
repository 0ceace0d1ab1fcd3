import itertools
import random

import pytest
from hypothesis import strategies as st

from pbadd.formula import Comparator, Literal, PBConstraint, PBFormula, Term


def all_assignments(n):
    for bits in itertools.product([False, True], repeat=n):
        yield {v + 1: b for v, b in enumerate(bits)}


def random_formula(rng: random.Random, max_vars=15, max_constraints=6, coeff=8, kmax=20,
                   max_terms=8, comparators=tuple(Comparator)):
    n = rng.randint(1, max_vars)
    constraints = []
    for _ in range(rng.randint(0, max_constraints)):
        vs = rng.sample(range(1, n + 1), rng.randint(0, min(n, max_terms)))
        terms = [Term(rng.choice([a for a in range(-coeff, coeff + 1) if a]),
                      Literal(v, rng.random() < 0.3)) for v in vs]
        constraints.append(PBConstraint(terms, rng.choice(comparators), rng.randint(-kmax, kmax)))
    return PBFormula(n, constraints)


@st.composite
def constraints(draw, max_vars=6, coeff=10, kmax=25, comparators=tuple(Comparator)):
    n = draw(st.integers(1, max_vars))
    vs = draw(st.lists(st.integers(1, n), unique=True, max_size=n))
    terms = [Term(draw(st.integers(-coeff, coeff).filter(bool)), Literal(v, draw(st.booleans())))
             for v in vs]
    c = PBConstraint(terms, draw(st.sampled_from(comparators)), draw(st.integers(-kmax, kmax)))
    return n, c


@st.composite
def formulas(draw, max_vars=7, max_constraints=4):
    n = draw(st.integers(1, max_vars))
    cs = []
    for _ in range(draw(st.integers(0, max_constraints))):
        vs = draw(st.lists(st.integers(1, n), unique=True, max_size=min(n, 5)))
        terms = [Term(draw(st.integers(-6, 6).filter(bool)), Literal(v, draw(st.booleans())))
                 for v in vs]
        cs.append(PBConstraint(terms, draw(st.sampled_from(list(Comparator))),
                               draw(st.integers(-12, 12))))
    return PBFormula(n, cs)


@pytest.fixture
def small_text():
    return "* #variable= 2 #constraint= 1\n+3 x1 +4 x2 >= 3 ;\n"


# ---------------------------------------------------------------------------
# random ADD expressions, evaluated both through the engine and directly

def random_expr(rng: random.Random, nvars: int, depth: int, boolean: bool = False):
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.3:
            return ("const", rng.randint(0, 1) if boolean else rng.randint(-3, 5))
        return ("lit", rng.randint(1, nvars), rng.random() < 0.5)
    if boolean:
        kind = rng.choice(["*", "not", "ite", "restrict"])
    else:
        kind = rng.choice(["+", "*", "ite", "restrict"])
    if kind in ("+", "*"):
        return (kind, random_expr(rng, nvars, depth - 1, boolean),
                random_expr(rng, nvars, depth - 1, boolean))
    if kind == "not":
        return ("not", random_expr(rng, nvars, depth - 1, True))
    if kind == "ite":
        return ("ite", random_expr(rng, nvars, depth - 1, True),
                random_expr(rng, nvars, depth - 1, boolean),
                random_expr(rng, nvars, depth - 1, boolean))
    return ("restrict", random_expr(rng, nvars, depth - 1, boolean),
            rng.randint(1, nvars), rng.random() < 0.5)


def eval_expr(e, a):
    kind = e[0]
    if kind == "const":
        return e[1]
    if kind == "lit":
        return int(a[e[1]] != e[2])
    if kind == "+":
        return eval_expr(e[1], a) + eval_expr(e[2], a)
    if kind == "*":
        return eval_expr(e[1], a) * eval_expr(e[2], a)
    if kind == "not":
        return 1 - eval_expr(e[1], a)
    if kind == "ite":
        return eval_expr(e[2], a) if eval_expr(e[1], a) else eval_expr(e[3], a)
    b = dict(a)
    b[e[2]] = e[3]
    return eval_expr(e[1], b)


def build_expr(m, e):
    kind = e[0]
    if kind == "const":
        return m.constant(e[1])
    if kind == "lit":
        return m.literal(Literal(e[1], e[2]))
    if kind in ("+", "*"):
        return m.apply(kind, build_expr(m, e[1]), build_expr(m, e[2]))
    if kind == "not":
        return m.apply("+", m.one, m.apply("*", m.constant(-1), build_expr(m, e[1])))
    if kind == "ite":
        return m.ite(build_expr(m, e[1]), build_expr(m, e[2]), build_expr(m, e[3]))
    return m.restrict(build_expr(m, e[1]), e[2], e[3])


def from_truth_table(m, fn, nvars):
    """Shannon expansion along the manager's order, bottom-up through var_node."""
    order = m.order

    def rec(i, a):
        if i == len(order):
            return m.constant(fn(a))
        v = order[i]
        lo = rec(i + 1, {**a, v: False})
        hi = rec(i + 1, {**a, v: True})
        return lo if lo == hi else m.var_node(v, lo, hi)

    return rec(0, {})


# Counts of the 30-variable case-study constraint, fixed once by the
# meet-in-the-middle oracle and cross-checked with a full subset-sum table.
CASE_STUDY_COUNTS = {
    10: 1073741803,
    100: 1073740068,
    1000: 1073571499,
    10000: 1058199570,
    100000: 835502848,
}
UNIT_CASE_STUDY_COUNTS = {10: 1050777737, 100: 0, 1000: 0, 10000: 0, 100000: 0}


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def detail(request):
    """Dict a criterion test fills with the figures shown in its summary line."""
    d = {}
    request.node.acceptance_detail = d
    return d


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    n, title = mark.args
    d = getattr(item, "acceptance_detail", {})
    text = ", ".join(f"{k}={v}" for k, v in d.items())
    ACCEPTANCE_RESULTS[n] = (report.passed, title, text)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, title, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
