"""Batch runs over generated instances, with CSV output."""

from __future__ import annotations

import csv
import time
from dataclasses import replace
from typing import Iterable, List, Sequence, Tuple

from ..add import AddManager
from ..compile import (CompileMode, CompileStats, optimize_compile_bottom_up,
                       optimize_compile_top_down)
from ..count import CountConfig, compute_count, count_formula, build_clusters, mcs_variable_order
from ..formula import PBFormula, render_opb
from .generators import GenSpec, case_study_formula, generate
from .oracle import brute_force_count

CORPUS_FIELDS = ["instance", "mode", "count", "seconds", "peak_nodes", "oracle_ok"]
CASE_STUDY_FIELDS = ["k", "unit_coefficients", "approach", "count", "seconds",
                     "recursive_calls", "peak_nodes"]


def corpus(size: int, n_range=(4, 12), m_range=(1, 4), seed: int = 0) -> List[Tuple[str, PBFormula]]:
    """Alternating knapsack/auction instances with sizes cycling through the ranges."""
    out = []
    ns = list(range(n_range[0], n_range[1] + 1))
    ms = list(range(m_range[0], m_range[1] + 1))
    for i in range(size):
        family = "knapsack" if i % 2 == 0 else "auction"
        spec = GenSpec(family, ns[i % len(ns)], ms[(i // len(ns)) % len(ms)], seed + i,
                       density=0.5 if family == "auction" and i % 4 == 3 else 1.0)
        out.append((f"{family}-n{spec.n}-m{spec.m}-s{spec.seed}", generate(spec)))
    return out


def run_instances(instances: Iterable[Tuple[str, PBFormula]], modes: Sequence[CompileMode],
                  config: CountConfig = CountConfig(), check_oracle: bool = True) -> List[dict]:
    rows = []
    for name, g in instances:
        expected = brute_force_count(g) if check_oracle else None
        for mode in modes:
            start = time.perf_counter()
            res = count_formula(g, config=replace(config, mode=mode))
            elapsed = time.perf_counter() - start
            rows.append({
                "instance": name,
                "mode": mode.value,
                "count": res.count,
                "seconds": round(elapsed, 6),
                "peak_nodes": res.stats.peak_nodes,
                "oracle_ok": "" if expected is None else res.count == expected,
            })
    return rows


def run_case_study(ks: Sequence[int], unit_coefficients: bool = False,
                   approaches: Sequence[str] = ("topdown", "bottomup")) -> List[dict]:
    """Compile and count the 30-variable case-study constraint with each approach."""
    rows = []
    for k in ks:
        g = case_study_formula(k, unit_coefficients)
        c = g.constraints[0]
        order = mcs_variable_order(g)
        for approach in approaches:
            m = AddManager(order.order)
            stats = CompileStats()
            start = time.perf_counter()
            if approach == "topdown":
                f = optimize_compile_top_down(m, c.terms, c.k, False, stats)
            else:
                f = optimize_compile_bottom_up(m, c.terms, c.k, False, stats, track_nodes=True)
            count = compute_count([f], build_clusters(g, order), None, range(1, 31), m)
            rows.append({
                "k": k,
                "unit_coefficients": unit_coefficients,
                "approach": approach,
                "count": count,
                "seconds": round(time.perf_counter() - start, 6),
                "recursive_calls": stats.calls,
                "peak_nodes": stats.peak_nodes,
            })
    return rows


def write_csv(rows: Sequence[dict], path, fields: Sequence[str]):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(fields))
        w.writeheader()
        for r in rows:
            w.writerow({f: r.get(f, "") for f in fields})


def write_corpus(instances: Iterable[Tuple[str, PBFormula]], directory):
    from pathlib import Path
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, g in instances:
        (directory / f"{name}.opb").write_text(render_opb(g))
