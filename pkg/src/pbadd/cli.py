"""Command-line entry point: ``pbadd {count,oracle,gen,compare,bench}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from .bench.generators import GenSpec, generate
from .bench.oracle import OracleLimitError, brute_force_count, mitm_count, MAX_MITM_TERMS
from .compile import CompileMode
from .count import ClusterStrategy, CountConfig, count_formula
from .formula import (OPBParseError, PBFormula, WeightFunction, WeightParseError, parse_opb,
                      parse_weights, render_opb)

EXIT_PARSE = 2
EXIT_ORACLE_LIMIT = 3
EXIT_MISMATCH = 4


class _InputError(Exception):
    pass


def _read_formula(path: str) -> PBFormula:
    try:
        return parse_opb(Path(path).read_text())
    except OSError as e:
        raise _InputError(f"{path}: {e.strerror}") from None
    except (OPBParseError, ValueError) as e:
        raise _InputError(f"{path}: {e}") from None


def _read_weights(path) -> WeightFunction | None:
    if path is None:
        return None
    try:
        return parse_weights(Path(path).read_text())
    except OSError as e:
        raise _InputError(f"{path}: {e.strerror}") from None
    except WeightParseError as e:
        raise _InputError(f"{path}: {e}") from None


def _result_line(value, weighted: bool) -> str:
    if weighted:
        v = Fraction(value)
        return f"s wmc {v.numerator}/{v.denominator}"
    return f"s mc {value}"


def _config(args) -> CountConfig:
    limit = int(os.environ.get("PBADD_CACHE_LIMIT", "0") or 0)
    return CountConfig(mode=CompileMode(args.compile), strategy=ClusterStrategy(args.cluster),
                       preprocess=not args.no_preprocess, cache_limit=limit,
                       track_nodes=args.stats)


def _oracle(g: PBFormula, weights):
    if weights is None and len(g.constraints) == 1 \
            and len(g.constraints[0].terms) <= MAX_MITM_TERMS:
        return mitm_count(g)
    return brute_force_count(g, weights)


def cmd_count(args, out):
    weights = _read_weights(args.weights)
    config = _config(args)
    for path in args.inputs:
        g = _read_formula(path)
        if len(args.inputs) > 1:
            print(f"c file {path}", file=out)
        res = count_formula(g, weights, config)
        if args.stats:
            s = res.stats
            print(f"c variables {g.num_vars}", file=out)
            print(f"c constraints {len(g.constraints)}", file=out)
            print(f"c forced {s.forced}", file=out)
            print(f"c peak_nodes {s.peak_nodes}", file=out)
            print(f"c apply_calls {s.apply_calls}", file=out)
            print(f"c top_down_calls {s.top_down_calls}", file=out)
            for i, mode in enumerate(s.modes):
                print(f"c mode {i} {mode}", file=out)
        print(_result_line(res.count, weights is not None), file=out)
    return 0


def cmd_oracle(args, out):
    g = _read_formula(args.input)
    weights = _read_weights(args.weights)
    try:
        value = _oracle(g, weights)
    except OracleLimitError as e:
        print(f"pbadd: {e}", file=sys.stderr)
        return EXIT_ORACLE_LIMIT
    print(_result_line(value, weights is not None), file=out)
    return 0


def cmd_compare(args, out):
    g = _read_formula(args.input)
    weights = _read_weights(args.weights)
    try:
        expected = _oracle(g, weights)
    except OracleLimitError as e:
        print(f"pbadd: {e}", file=sys.stderr)
        return EXIT_ORACLE_LIMIT
    got = count_formula(g, weights, _config(args)).count
    print(f"c counter {got}", file=out)
    print(f"c oracle {expected}", file=out)
    print(_result_line(got, weights is not None), file=out)
    if got != expected:
        print("pbadd: counter and oracle disagree", file=sys.stderr)
        return EXIT_MISMATCH
    return 0


def cmd_gen(args, out):
    spec = GenSpec(args.family, args.n, args.m, args.seed, density=args.density, k=args.k)
    text = render_opb(generate(spec))
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return 0


def cmd_bench(args, out):
    from .bench import harness, plotting

    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.suite == "corpus":
        instances = harness.corpus(args.size, seed=args.seed)
        modes = [CompileMode(m) for m in args.modes]
        rows = harness.run_instances(instances, modes, _config(args))
        csv_path = outdir / "corpus.csv"
        harness.write_csv(rows, csv_path, harness.CORPUS_FIELDS)
        fig = plotting.cactus_plot(rows, outdir / "corpus_cactus.png")
        bad = [r for r in rows if r["oracle_ok"] is False]
        print(f"c instances {len(instances)}", file=out)
        print(f"c oracle_mismatches {len(bad)}", file=out)
    else:
        rows = harness.run_case_study(args.k_values, args.unit_coeffs)
        csv_path = outdir / "casestudy.csv"
        harness.write_csv(rows, csv_path, harness.CASE_STUDY_FIELDS)
        fig = plotting.case_study_plot(rows, outdir / "casestudy.png")
        bad = []
    print(f"c wrote {csv_path}", file=out)
    print(f"c wrote {fig}", file=out)
    return EXIT_MISMATCH if bad else 0


def _add_count_flags(p):
    p.add_argument("--compile", choices=[m.value for m in CompileMode], default="dynamic")
    p.add_argument("--cluster", choices=[s.value for s in ClusterStrategy], default="list")
    p.add_argument("--no-preprocess", action="store_true")
    p.add_argument("--weights", metavar="FILE")
    p.add_argument("--stats", action="store_true", help="print run statistics as c-lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pbadd", description="Exact pseudo-Boolean model counting")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count models of OPB files")
    p.add_argument("inputs", nargs="+")
    _add_count_flags(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("oracle", help="count by enumeration or meet-in-the-middle")
    p.add_argument("input")
    p.add_argument("--weights", metavar="FILE")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="run counter and oracle; exit 4 on mismatch")
    p.add_argument("input")
    _add_count_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="write a generated instance as OPB")
    p.add_argument("--family", choices=["knapsack", "auction", "casestudy"], required=True)
    p.add_argument("-n", type=int, default=10)
    p.add_argument("-m", type=int, default=2)
    p.add_argument("-k", type=int, default=10, help="right-hand side for casestudy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a benchmark suite; writes CSV and figures")
    p.add_argument("--suite", choices=["corpus", "casestudy"], default="corpus")
    p.add_argument("--out-dir", default="bench-out")
    p.add_argument("--size", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--modes", nargs="+", default=["bottomup", "topdown", "dynamic"],
                   choices=[m.value for m in CompileMode])
    p.add_argument("--k-values", type=int, nargs="+", default=[10, 100, 1000, 10000, 100000])
    p.add_argument("--unit-coeffs", action="store_true")
    _add_count_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="c %(name)s: %(message)s", stream=sys.stderr)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        return args.func(args, out)
    except _InputError as e:
        print(f"pbadd: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
