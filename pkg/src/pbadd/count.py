"""Dynamic-programming model counting over constraint ADDs.

Pipeline: normalize -> preprocess -> MCS variable order -> compile each
constraint -> cluster -> multiply clusters with early projection.
"""

from __future__ import annotations

import enum
import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from .add import ADD, AddManager, ADDError
from .compile import CompileMode, CompileStats, compile_constraint
from .formula import Literal, PBFormula, WeightFunction, normalize_formula
from .preprocess import preprocess

log = logging.getLogger(__name__)


class ClusterStrategy(enum.Enum):
    LIST = "list"
    TREE = "tree"


@dataclass(frozen=True)
class VariableOrder:
    order: tuple

    @property
    def rank(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}


@dataclass
class ClusterPlan:
    clusters: List[List[int]]
    strategy: ClusterStrategy = ClusterStrategy.LIST
    # index of the cluster each cluster's result is sent to (TREE only)
    parents: Optional[List[Optional[int]]] = None
    # variables of each cluster's constraints
    cluster_vars: Optional[List[FrozenSet[int]]] = None


@dataclass
class CountStats:
    peak_nodes: int = 0
    apply_calls: int = 0
    manager_nodes: int = 0
    forced: int = 0
    modes: List[str] = field(default_factory=list)
    top_down_calls: int = 0
    unsat_by_preprocessing: bool = False


@dataclass
class CountResult:
    count: int | Fraction
    stats: CountStats


@dataclass
class CountConfig:
    mode: CompileMode = CompileMode.DYNAMIC
    strategy: ClusterStrategy = ClusterStrategy.LIST
    preprocess: bool = True
    cache_limit: int = 0
    track_nodes: bool = False


# ---------------------------------------------------------------------------
# ordering and clustering

def primal_graph(g: PBFormula) -> Dict[int, set]:
    adj = {v: set() for v in range(1, g.num_vars + 1)}
    for c in g.constraints:
        vs = c.variables
        for v in vs:
            adj[v].update(vs)
            adj[v].discard(v)
    return adj


def mcs_variable_order(g: PBFormula) -> VariableOrder:
    """Maximum cardinality search over the primal graph.

    Starts at x1 and always takes the unvisited variable with the most visited
    neighbours, lowest index first on ties.
    """
    adj = primal_graph(g)
    weight = {v: 0 for v in adj}
    heap = [(0, v) for v in adj]
    heapq.heapify(heap)
    visited = set()
    order = []
    while heap:
        w, v = heapq.heappop(heap)
        if v in visited or -w != weight[v]:
            continue
        visited.add(v)
        order.append(v)
        for u in adj[v]:
            if u not in visited:
                weight[u] += 1
                heapq.heappush(heap, (-weight[u], u))
    return VariableOrder(tuple(order))


def _tree_parents(cluster_vars: Sequence[FrozenSet[int]]) -> List[Optional[int]]:
    n = len(cluster_vars)
    later: List[FrozenSet[int]] = [frozenset()] * (n + 1)
    for j in range(n - 1, -1, -1):
        later[j] = later[j + 1] | cluster_vars[j + 1] if j + 1 < n else frozenset()
    incoming: List[set] = [set() for _ in range(n)]
    parents: List[Optional[int]] = []
    for j in range(n):
        # over-approximates the support of cluster j's projected result
        sup = (set(cluster_vars[j]) | incoming[j]) & later[j]
        parent = None
        for i in range(j + 1, n):
            if cluster_vars[i] & sup:
                parent = i
                break
        parents.append(parent)
        if parent is not None:
            incoming[parent] |= sup
    return parents


def build_clusters(g: PBFormula, order: VariableOrder,
                   strategy: ClusterStrategy = ClusterStrategy.LIST) -> ClusterPlan:
    """Group constraints by the rank of their earliest variable."""
    rank = order.rank
    buckets: Dict[int, List[int]] = {}
    for i, c in enumerate(g.constraints):
        key = min((rank[v] for v in c.variables), default=0)
        buckets.setdefault(key, []).append(i)
    clusters = [buckets[key] for key in sorted(buckets)]
    cluster_vars = [frozenset().union(*(g.constraints[i].variables for i in cl))
                    for cl in clusters]
    parents = _tree_parents(cluster_vars) if strategy is ClusterStrategy.TREE else None
    return ClusterPlan(clusters, strategy, parents, cluster_vars)


# ---------------------------------------------------------------------------
# counting

def project(m: AddManager, psi: ADD, x: int, weights: WeightFunction) -> ADD:
    """``W(~x) * psi[x=0] + W(x) * psi[x=1]``."""
    lo = m.apply("*", m.constant(weights(Literal(x, True))), m.restrict(psi, x, False))
    hi = m.apply("*", m.constant(weights(Literal(x))), m.restrict(psi, x, True))
    return m.apply("+", lo, hi)


def project_all(m: AddManager, psi: ADD, xs: Iterable[int], weights: WeightFunction) -> ADD:
    for x in xs:
        psi = project(m, psi, x, weights)
    return psi


def compute_count(phi: Sequence[ADD], plan: ClusterPlan, weights: Optional[WeightFunction],
                  universe: Iterable[int], m: AddManager,
                  stats: Optional[CountStats] = None):
    """Multiply cluster ADDs in plan order, projecting variables early."""
    weights = weights or WeightFunction()
    universe = set(universe)
    for f in phi:
        if not m.is_indicator(f):
            raise ADDError("compute_count expects 0/1-leaf constraint ADDs")
        extra = m.support(f) - universe
        if extra:
            raise ADDError(f"constraint ADD mentions x{min(extra)} outside the universe")
    clusters = plan.clusters
    n = len(clusters)
    if plan.cluster_vars is not None:
        cvars = list(plan.cluster_vars)
    else:
        cvars = [frozenset().union(*(m.support(phi[i]) for i in cl)) for cl in clusters]
    later = [frozenset()] * n
    acc = frozenset()
    for j in range(n - 1, -1, -1):
        later[j] = acc
        acc = acc | cvars[j]
    rank = m.level
    processed = set()

    def note(psi):
        if stats is not None:
            stats.peak_nodes = max(stats.peak_nodes, m.node_count(psi))

    def early_project(psi, j):
        for x in sorted(m.support(psi) - later[j], key=rank.__getitem__):
            psi = project(m, psi, x, weights)
            processed.add(x)
        return psi

    def cluster_product(j):
        psi_j = m.one
        for i in clusters[j]:
            psi_j = m.apply("*", psi_j, phi[i])
        return psi_j

    if plan.strategy is ClusterStrategy.TREE:
        if plan.parents is not None and plan.cluster_vars is not None:
            parents = plan.parents
        else:
            parents = _tree_parents(cvars)
        pending: List[List[ADD]] = [[] for _ in range(n)]
        roots: List[ADD] = []
        for j in range(n):
            r = cluster_product(j)
            for child in pending[j]:
                r = m.apply("*", r, child)
            note(r)
            r = early_project(r, j)
            if parents[j] is None:
                roots.append(r)
            else:
                pending[parents[j]].append(r)
        psi = m.one
        for r in roots:
            psi = m.apply("*", psi, r)
    else:
        psi = m.one
        for j in range(n):
            psi = m.apply("*", psi, cluster_product(j))
            note(psi)
            psi = early_project(psi, j)

    rest = sorted(universe - processed)
    psi = project_all(m, psi, rest, weights)
    return m.get_value(psi)


def _forced_weight(forced: Dict[int, bool], weights: WeightFunction):
    w = Fraction(1)
    for v, val in forced.items():
        w *= weights(Literal(v, not val))
    return w


def _exact(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def count_formula(g: PBFormula, weights: Optional[WeightFunction] = None,
                  config: Optional[CountConfig] = None) -> CountResult:
    """Exact (weighted) model count of ``g`` over variables 1..num_vars."""
    config = config or CountConfig()
    weights = weights or WeightFunction()
    stats = CountStats()
    g = normalize_formula(g)
    forced: Dict[int, bool] = {}
    if config.preprocess:
        out = preprocess(g)
        if out.unsat:
            stats.unsat_by_preprocessing = True
            return CountResult(0, stats)
        g, forced = out.reduced, out.forced
        stats.forced = len(forced)
    kept = []
    for c in g.constraints:
        if c.terms or c.is_false_marker():
            kept.append(c)
    g = PBFormula(g.num_vars, kept)

    order = mcs_variable_order(g)
    m = AddManager(order.order, cache_limit=config.cache_limit)
    phi = []
    for c in g.constraints:
        cs = CompileStats()
        phi.append(compile_constraint(m, c, config.mode, cs, config.track_nodes))
        stats.modes.append(cs.mode.value)
        stats.top_down_calls += cs.calls
        stats.peak_nodes = max(stats.peak_nodes, cs.peak_nodes, m.node_count(phi[-1]))
        log.debug("compiled %s with %s", c, cs.mode.value)
    plan = build_clusters(g, order, config.strategy)
    universe = [v for v in range(1, g.num_vars + 1) if v not in forced]
    value = compute_count(phi, plan, weights, universe, m, stats)
    value = _exact(Fraction(value) * _forced_weight(forced, weights))
    stats.apply_calls = m.apply_calls
    stats.manager_nodes = m.size
    return CountResult(value, stats)
