"""Reduced ordered algebraic decision diagrams with exact rational leaves.

Nodes live in parallel lists inside an :class:`AddManager` and are identified
by small integers.  The public surface hands out :class:`ADD` handles, which
pair a node id with its manager; handles compare equal iff they denote the
same node, and by canonicity that means the same function.

Variables are ordered by a fixed permutation given at construction time.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from numbers import Rational
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set

from .formula import Literal

LEAF = sys.maxsize  # level of every leaf; sorts after all variables

ADD_OP = 0
MUL_OP = 1


class ADDError(Exception):
    pass


def _exact(v) -> int | Fraction:
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, int):
        return v
    if isinstance(v, Rational):
        v = Fraction(v)
        return v.numerator if v.denominator == 1 else v
    raise TypeError(f"ADD leaves must be exact rationals, got {type(v).__name__}")


class ADD:
    """Handle to a node of an :class:`AddManager`."""

    __slots__ = ("mgr", "node")

    def __init__(self, mgr: AddManager, node: int):
        self.mgr = mgr
        self.node = node

    def __eq__(self, other):
        return isinstance(other, ADD) and self.mgr is other.mgr and self.node == other.node

    def __hash__(self):
        return hash((id(self.mgr), self.node))

    def __repr__(self):
        if self.is_leaf:
            return f"ADD(leaf={self.value})"
        return f"ADD(node={self.node}, var=x{self.var})"

    def __add__(self, other):
        return self.mgr.apply("+", self, other)

    def __mul__(self, other):
        return self.mgr.apply("*", self, other)

    @property
    def is_leaf(self) -> bool:
        return self.mgr._lvl[self.node] == LEAF

    @property
    def value(self):
        return self.mgr.get_value(self)

    @property
    def var(self) -> Optional[int]:
        lvl = self.mgr._lvl[self.node]
        return None if lvl == LEAF else self.mgr.order[lvl]

    @property
    def lo(self) -> ADD:
        return ADD(self.mgr, self.mgr._lo[self.node])

    @property
    def hi(self) -> ADD:
        return ADD(self.mgr, self.mgr._hi[self.node])


class AddManager:
    """Unique table, leaf table and operation caches for one variable order.

    ``cache_limit`` is a soft cap on each operation cache; when a cache grows
    past it the cache is dropped.  0 means unbounded.
    """

    def __init__(self, order: Sequence[int] = (), cache_limit: int = 0):
        self.order: List[int] = list(order)
        self.level: Dict[int, int] = {v: i for i, v in enumerate(self.order)}
        if len(self.level) != len(self.order):
            raise ValueError("variable order contains duplicates")
        self.cache_limit = cache_limit
        self._lvl: List[int] = []
        self._lo: List[int] = []
        self._hi: List[int] = []
        self._val: list = []
        self._unique: Dict[tuple, int] = {}
        self._leaves: Dict[object, int] = {}
        self._add_cache: Dict[tuple, int] = {}
        self._mul_cache: Dict[tuple, int] = {}
        self._ite_cache: Dict[tuple, int] = {}
        self._restrict_cache: Dict[tuple, int] = {}
        self._indicator: Dict[int, bool] = {}
        self.apply_calls = 0
        self._zero = self._leaf(0)
        self._one = self._leaf(1)

    # -- node construction -------------------------------------------------

    def _leaf(self, value) -> int:
        value = _exact(value)
        n = self._leaves.get(value)
        if n is None:
            n = len(self._lvl)
            self._lvl.append(LEAF)
            self._lo.append(-1)
            self._hi.append(-1)
            self._val.append(value)
            self._leaves[value] = n
        return n

    def _mk(self, lvl: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (lvl, lo, hi)
        n = self._unique.get(key)
        if n is None:
            n = len(self._lvl)
            self._lvl.append(lvl)
            self._lo.append(lo)
            self._hi.append(hi)
            self._val.append(None)
            self._unique[key] = n
        return n

    def _wrap(self, node: int) -> ADD:
        return ADD(self, node)

    def _own(self, f: ADD) -> int:
        if not isinstance(f, ADD) or f.mgr is not self:
            raise ADDError("handle belongs to a different manager")
        return f.node

    def _var_level(self, var: int) -> int:
        try:
            return self.level[var]
        except KeyError:
            raise ADDError(f"variable x{var} is not in this manager's order") from None

    @property
    def zero(self) -> ADD:
        return ADD(self, self._zero)

    @property
    def one(self) -> ADD:
        return ADD(self, self._one)

    @property
    def size(self) -> int:
        """Number of nodes ever created (there is no garbage collection)."""
        return len(self._lvl)

    def clear_caches(self):
        self._add_cache.clear()
        self._mul_cache.clear()
        self._ite_cache.clear()
        self._restrict_cache.clear()

    def _remember(self, cache: dict, key, value: int):
        if self.cache_limit and len(cache) >= self.cache_limit:
            cache.clear()
        cache[key] = value

    # -- leaves and literals -----------------------------------------------

    def constant(self, value) -> ADD:
        return ADD(self, self._leaf(value))

    def literal(self, lit: Literal) -> ADD:
        lvl = self._var_level(lit.variable)
        if lit.negated:
            return ADD(self, self._mk(lvl, self._one, self._zero))
        return ADD(self, self._mk(lvl, self._zero, self._one))

    def var_node(self, var: int, lo: ADD, hi: ADD) -> ADD:
        """``if var then hi else lo``; ``var`` must precede the children's variables."""
        lvl = self._var_level(var)
        lo_n, hi_n = self._own(lo), self._own(hi)
        if lvl >= min(self._lvl[lo_n], self._lvl[hi_n]):
            raise ADDError("var_node would violate the variable order")
        return ADD(self, self._mk(lvl, lo_n, hi_n))

    # -- apply ---------------------------------------------------------------

    def apply(self, op: str, f: ADD, g: ADD) -> ADD:
        if op in ("+", "add"):
            code = ADD_OP
        elif op in ("*", "x", "mul"):
            code = MUL_OP
        else:
            raise ADDError(f"unsupported operator {op!r}")
        return ADD(self, self._apply(code, self._own(f), self._own(g)))

    def _apply(self, op: int, f: int, g: int) -> int:
        self.apply_calls += 1
        if f > g:
            f, g = g, f
        lvl = self._lvl
        lf = lvl[f]
        lg = lvl[g]
        if lf == LEAF and lg == LEAF:
            a = self._val[f]
            b = self._val[g]
            return self._leaf(a + b if op == ADD_OP else a * b)
        zero = self._zero
        if op == MUL_OP:
            if f == zero or g == zero:
                return zero
            if f == self._one:
                return g
            if g == self._one:
                return f
            cache = self._mul_cache
        else:
            if f == zero:
                return g
            if g == zero:
                return f
            cache = self._add_cache
        key = (f, g)
        r = cache.get(key)
        if r is not None:
            return r
        if lf < lg:
            top = lf
            f0, f1, g0, g1 = self._lo[f], self._hi[f], g, g
        elif lg < lf:
            top = lg
            f0, f1, g0, g1 = f, f, self._lo[g], self._hi[g]
        else:
            top = lf
            f0, f1, g0, g1 = self._lo[f], self._hi[f], self._lo[g], self._hi[g]
        r = self._mk(top, self._apply(op, f0, g0), self._apply(op, f1, g1))
        self._remember(cache, key, r)
        return r

    # -- ite -----------------------------------------------------------------

    def is_indicator(self, f: ADD) -> bool:
        """True when every leaf of ``f`` is 0 or 1."""
        return self._is01(self._own(f))

    def _is01(self, f: int) -> bool:
        r = self._indicator.get(f)
        if r is None:
            if self._lvl[f] == LEAF:
                r = f == self._zero or f == self._one
            else:
                r = self._is01(self._lo[f]) and self._is01(self._hi[f])
            self._indicator[f] = r
        return r

    def ite(self, f: ADD, g: ADD, h: ADD) -> ADD:
        fn, gn, hn = self._own(f), self._own(g), self._own(h)
        if not self._is01(fn):
            raise ADDError("ITE condition must have only 0/1 leaves")
        return ADD(self, self._ite(fn, gn, hn))

    def _ite(self, f: int, g: int, h: int) -> int:
        if f == self._one:
            return g
        if f == self._zero:
            return h
        if g == h:
            return g
        if g == self._one and h == self._zero:
            return f
        key = (f, g, h)
        r = self._ite_cache.get(key)
        if r is not None:
            return r
        lvl = self._lvl
        top = min(lvl[f], lvl[g], lvl[h])
        lo, hi = self._lo, self._hi
        f0, f1 = (lo[f], hi[f]) if lvl[f] == top else (f, f)
        g0, g1 = (lo[g], hi[g]) if lvl[g] == top else (g, g)
        h0, h1 = (lo[h], hi[h]) if lvl[h] == top else (h, h)
        r = self._mk(top, self._ite(f0, g0, h0), self._ite(f1, g1, h1))
        self._remember(self._ite_cache, key, r)
        return r

    # -- restriction, leaf maps, queries ---------------------------------------

    def restrict(self, f: ADD, var: int, value: bool) -> ADD:
        fn = self._own(f)
        lvl = self.level.get(var)
        if lvl is None:
            return f
        return ADD(self, self._restrict(fn, lvl, bool(value)))

    def _restrict(self, f: int, lvl: int, value: bool) -> int:
        lf = self._lvl[f]
        if lf > lvl:
            return f
        if lf == lvl:
            return self._hi[f] if value else self._lo[f]
        key = (f, lvl, value)
        r = self._restrict_cache.get(key)
        if r is not None:
            return r
        r = self._mk(lf, self._restrict(self._lo[f], lvl, value),
                     self._restrict(self._hi[f], lvl, value))
        self._remember(self._restrict_cache, key, r)
        return r

    def map_leaves(self, f: ADD, fn: Callable) -> ADD:
        """Replace every leaf value ``v`` by ``fn(v)`` and re-reduce."""
        memo: Dict[int, int] = {}
        lvl, lo, hi, val = self._lvl, self._lo, self._hi, self._val

        def walk(n):
            r = memo.get(n)
            if r is None:
                if lvl[n] == LEAF:
                    r = self._leaf(fn(val[n]))
                else:
                    r = self._mk(lvl[n], walk(lo[n]), walk(hi[n]))
                memo[n] = r
            return r

        return ADD(self, walk(self._own(f)))

    def get_value(self, f: ADD):
        n = self._own(f)
        if self._lvl[n] != LEAF:
            raise ADDError("get_value on a non-constant ADD")
        return self._val[n]

    def _reachable(self, n: int) -> Set[int]:
        seen = {n}
        stack = [n]
        lo, hi, lvl = self._lo, self._hi, self._lvl
        while stack:
            m = stack.pop()
            if lvl[m] != LEAF:
                for c in (lo[m], hi[m]):
                    if c not in seen:
                        seen.add(c)
                        stack.append(c)
        return seen

    def node_count(self, f: ADD) -> int:
        """Distinct reachable nodes, leaves included."""
        return len(self._reachable(self._own(f)))

    def support(self, f: ADD) -> Set[int]:
        lvl = self._lvl
        return {self.order[lvl[n]] for n in self._reachable(self._own(f)) if lvl[n] != LEAF}

    def leaf_values(self, f: ADD) -> list:
        lvl, val = self._lvl, self._val
        return [val[n] for n in self._reachable(self._own(f)) if lvl[n] == LEAF]

    def evaluate(self, f: ADD, assignment) -> object:
        """Follow one path; ``assignment`` maps variable -> bool."""
        n = self._own(f)
        lvl, lo, hi = self._lvl, self._lo, self._hi
        while lvl[n] != LEAF:
            n = hi[n] if assignment[self.order[lvl[n]]] else lo[n]
        return self._val[n]

    def check_reduced(self, f: ADD) -> bool:
        """Structural sanity: ordered, no redundant node, unique-table consistent."""
        lvl, lo, hi = self._lvl, self._lo, self._hi
        for n in self._reachable(self._own(f)):
            if lvl[n] == LEAF:
                continue
            if lo[n] == hi[n] or lvl[lo[n]] <= lvl[n] or lvl[hi[n]] <= lvl[n]:
                return False
            if self._unique.get((lvl[n], lo[n], hi[n])) != n:
                return False
        return True

    def to_dot(self, f: ADD, name: str = "add") -> str:
        """Graphviz text; dotted edges are the false branch, solid the true branch."""
        lvl, lo, hi, val = self._lvl, self._lo, self._hi, self._val
        lines = [f"digraph {name} {{"]
        for n in sorted(self._reachable(self._own(f))):
            if lvl[n] == LEAF:
                lines.append(f'  n{n} [shape=box,label="{val[n]}"];')
            else:
                lines.append(f'  n{n} [shape=circle,label="x{self.order[lvl[n]]}"];')
                lines.append(f"  n{n} -> n{lo[n]} [style=dotted];")
                lines.append(f"  n{n} -> n{hi[n]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def sum_of(mgr: AddManager, adds: Iterable[ADD]) -> ADD:
    acc = mgr.zero
    for a in adds:
        acc = mgr.apply("+", acc, a)
    return acc


def product_of(mgr: AddManager, adds: Iterable[ADD]) -> ADD:
    acc = mgr.one
    for a in adds:
        acc = mgr.apply("*", acc, a)
    return acc
