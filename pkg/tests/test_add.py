import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbadd.add import ADDError, AddManager, product_of, sum_of
from pbadd.formula import Literal

from conftest import all_assignments, build_expr, eval_expr, from_truth_table, random_expr


@pytest.fixture
def m():
    return AddManager([1, 2, 3])


def sum_add(m):
    return m.apply("+", m.apply("*", m.constant(3), m.literal(Literal(1))),
                   m.apply("*", m.constant(4), m.literal(Literal(2))))


def test_constants(m):
    assert m.constant(5) == m.constant(5)
    assert m.get_value(m.constant(0)) == 0
    assert m.get_value(m.constant(Fraction(3, 10))) == Fraction(3, 10)
    assert m.constant(Fraction(4, 2)) == m.constant(2)
    assert m.node_count(m.constant(9)) == 1


def test_literals(m):
    x1 = m.literal(Literal(1))
    assert (x1.var, x1.lo, x1.hi) == (1, m.zero, m.one)
    nx1 = m.literal(Literal(1, True))
    assert (nx1.var, nx1.lo, nx1.hi) == (1, m.one, m.zero)
    assert m.apply("+", x1, nx1) == m.one
    with pytest.raises(ADDError):
        m.literal(Literal(9))


def test_sum_of_scaled_literals(m):
    f = sum_add(m)
    assert m.node_count(f) == 7
    assert sorted(m.leaf_values(f)) == [0, 3, 4, 7]
    assert m.support(f) == {1, 2}
    with pytest.raises(ADDError):
        m.get_value(f)
    r = m.restrict(f, 1, True)
    assert r.var == 2 and sorted(m.leaf_values(r)) == [3, 7]


def test_threshold_of_sum(m):
    f = sum_add(m)
    g = m.map_leaves(f, lambda v: 1 if v >= 3 else 0)
    assert m.node_count(g) == 4
    assert m.support(g) == {1, 2}
    assert g.var == 1 and g.hi == m.one and g.lo == m.literal(Literal(2))
    assert m.map_leaves(f, lambda v: v) == f
    only7 = m.map_leaves(f, lambda v: int(v == 7))
    assert only7 == m.apply("*", m.literal(Literal(1)), m.literal(Literal(2)))


def test_apply_identities(m):
    f = sum_add(m)
    assert m.apply("*", m.one, f) == f
    assert m.apply("*", f, m.zero) == m.zero
    assert m.apply("+", m.constant(3), m.constant(4)) == m.constant(7)
    assert f + m.zero == f and f * m.one == f
    with pytest.raises(ADDError):
        m.apply("-", f, f)
    with pytest.raises(ADDError):
        m.apply("+", f, AddManager([1, 2]).one)


def test_ite(m):
    x1 = m.literal(Literal(1))
    assert m.ite(x1, m.one, m.zero) == x1
    f = sum_add(m)
    assert m.ite(m.one, f, m.zero) == f
    assert m.ite(m.zero, f, m.constant(2)) == m.constant(2)
    with pytest.raises(ADDError):
        m.ite(f, m.one, m.zero)


def test_restrict(m):
    assert m.restrict(m.constant(5), 1, True) == m.constant(5)
    assert m.restrict(m.literal(Literal(1)), 1, False) == m.zero
    f = sum_add(m)
    assert m.restrict(f, 3, True) == f


def test_var_node_and_sums(m):
    x2 = m.literal(Literal(2))
    f = m.var_node(1, m.zero, x2)
    assert f == m.apply("*", m.literal(Literal(1)), x2)
    with pytest.raises(ADDError):
        m.var_node(3, m.zero, x2)
    assert sum_of(m, []) == m.zero and product_of(m, []) == m.one
    assert sum_of(m, [m.constant(2)] * 3) == m.constant(6)


def test_dot(m):
    dot = m.to_dot(sum_add(m), "fig1")
    assert dot.startswith("digraph fig1 {")
    assert dot.count("style=dotted") == 3
    assert dot.count("shape=box") == 4


def test_duplicate_order_rejected():
    with pytest.raises(ValueError):
        AddManager([1, 1])


def test_cache_limit_does_not_change_results():
    rng = random.Random(5)
    a, b = AddManager(range(1, 7)), AddManager(range(1, 7), cache_limit=4)
    for _ in range(50):
        e = random_expr(rng, 6, 5)
        fa, fb = build_expr(a, e), build_expr(b, e)
        for x in all_assignments(6):
            assert a.evaluate(fa, x) == b.evaluate(fb, x)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 8))
def test_canonicity_against_truth_table(seed, n):
    rng = random.Random(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    m = AddManager(order)
    e = random_expr(rng, n, 5)
    f = build_expr(m, e)
    assert m.check_reduced(f)
    assert f == from_truth_table(m, lambda a: eval_expr(e, a), n)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_pointwise_ten_variables(seed):
    rng = random.Random(seed)
    m = AddManager(range(1, 11))
    e = random_expr(rng, 10, 6)
    f = build_expr(m, e)
    for a in all_assignments(10):
        assert m.evaluate(f, a) == eval_expr(e, a)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 4), st.booleans())
def test_apply_algebra(seed, x, val):
    rng = random.Random(seed)
    m = AddManager(range(1, 5))
    a, b = build_expr(m, random_expr(rng, 4, 4)), build_expr(m, random_expr(rng, 4, 4))
    assert m.apply("+", a, b) == m.apply("+", b, a)
    assert m.apply("*", a, b) == m.apply("*", b, a)
    assert m.apply("*", a, m.zero) == m.zero
    for op in "+*":
        assert m.restrict(m.apply(op, a, b), x, val) == \
            m.apply(op, m.restrict(a, x, val), m.restrict(b, x, val))
    # distributivity follows from canonicity of pointwise-equal functions
    c = build_expr(m, random_expr(rng, 4, 3))
    assert m.apply("*", a, m.apply("+", b, c)) == \
        m.apply("+", m.apply("*", a, b), m.apply("*", a, c))


def test_rational_leaves_stay_exact():
    m = AddManager([1])
    f = m.apply("+", m.constant(Fraction(1, 3)), m.constant(Fraction(2, 3)))
    assert f == m.one and isinstance(m.get_value(f), int)
