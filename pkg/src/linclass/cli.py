"""Command line entry point ``linclass``.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 incomplete
(search budget exhausted).
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import archive
from .archive import ArchiveError, CodeArchive
from .canon import ScaleExceeded, automorphism_order, dedupe
from .classify import ClassificationTask, classify, k2_formula, min_minimal_codewords_table
from .code import (
    InconsistentInput,
    is_divisible,
    is_projective,
    macwilliams_transform,
    minimal_codewords_count,
    power_moments,
    weight_enumerator,
)
from .extender import ExtensionProblem, extend
from .weights import WeightSet

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def _weights(args, n_max: int) -> WeightSet:
    try:
        if args.weights:
            return WeightSet.explicit(args.weights)
        if args.d is None:
            raise UsageError("give --weights or --d")
        return WeightSet.min_distance(args.d, n_max, 2 if args.even else 1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- classify ---------------------------------------------------------------


def cmd_classify(args) -> int:
    ws = _weights(args, args.nmax)
    max_mult = 1 if args.projective else args.max_mult
    try:
        task = ClassificationTask(
            args.q,
            ws,
            args.nmax,
            args.kmax,
            max_mult=max_mult,
            max_redundancy=args.max_redundancy,
            shards=args.shards,
            budget_nodes=args.budget_nodes,
            canonical=not args.no_canonical,
            lexicographic=not args.no_lex,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = classify(task, out_dir=None if args.count_only else args.out, count_only=args.count_only)
    out = sys.stdout
    out.write(archive.format_count_rows(result.cells()))
    out.write("\n")
    rows = {n: result.row(n, cumulative=args.cumulative) for n in range(1, args.nmax + 1)}
    rows = {n: r for n, r in rows.items() if any(r) or n >= min(ws.weights)}
    out.write(archive.format_table(rows))
    if args.out and not args.count_only:
        Path(args.out, "counts.tsv").write_text(archive.format_count_rows(result.cells()), encoding="ascii")
    return EXIT_OK if result.is_complete() else EXIT_PARTIAL


# -- extend -----------------------------------------------------------------


def cmd_extend(args) -> int:
    arc = CodeArchive.load(args.input)
    ws = _weights(args, arc.n + args.r)
    children, complete = [], True
    for parent in arc.codes:
        try:
            problem = ExtensionProblem(parent, args.r, ws, canonical=not args.no_canonical, lexicographic=not args.no_lex)
            kids, ok = extend(problem, args.budget_nodes)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        children.extend(kids)
        complete &= ok
    children = dedupe(children)
    out = CodeArchive.from_codes(arc.q, arc.n + args.r, arc.k + 1, children, complete)
    text = out.dumps()
    if args.out:
        out.save(args.out)
    else:
        sys.stdout.write(text)
    print(f"{len(children)} children", file=sys.stderr)
    return EXIT_OK if complete else EXIT_PARTIAL


# -- invariants -------------------------------------------------------------


def cmd_invariants(args) -> int:
    arc = CodeArchive.load(args.input)
    for i, code in enumerate(arc.codes):
        print(f"code {i}: [{code.n},{code.k}]_{code.q}")
        print(f"  weight enumerator: {weight_enumerator(code)}")
        print(f"  column multiplicity: min {code.min_col_mult} max {code.max_col_mult}")
        print(f"  projective: {'yes' if is_projective(code) else 'no'}")
        if args.delta:
            print(f"  {args.delta}-divisible: {'yes' if is_divisible(code, args.delta) else 'no'}")
        if code.q == 2 or args.minimal:
            try:
                print(f"  minimal codewords: {minimal_codewords_count(code)}")
            except ValueError as exc:
                print(f"  warning: minimal codewords skipped ({exc})", file=sys.stderr)
        if args.aut:
            try:
                print(f"  automorphism group order: {automorphism_order(code)}")
            except ScaleExceeded as exc:
                print(f"  warning: automorphism order skipped ({exc})", file=sys.stderr)
    return EXIT_OK


# -- macwilliams ------------------------------------------------------------


def _parse_vector(text: str) -> list[int]:
    """``1,0,0,7`` (dense) or ``0:1,45:588`` (sparse)."""
    if ":" not in text:
        return _int_list(text)
    coeffs: dict[int, int] = {}
    for part in text.split(","):
        i, a = part.split(":")
        coeffs[int(i)] = int(a)
    out = [0] * (max(coeffs) + 1)
    for i, a in coeffs.items():
        out[i] = a
    return out


def _fmt(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_macwilliams(args) -> int:
    try:
        a = _parse_vector(args.a)
    except ValueError as exc:
        raise UsageError(f"bad --a: {exc}") from exc
    n = args.n if args.n is not None else len(a) - 1
    try:
        dual = macwilliams_transform(a, args.q, args.k, n)
    except InconsistentInput as exc:
        raise UsageError(str(exc)) from exc
    print("B: " + " ".join(_fmt(b) for b in dual.coeffs))
    terms = [f"{_fmt(b)}x^{j}" if j else _fmt(b) for j, b in enumerate(dual.coeffs) if b]
    print("dual weight enumerator: " + " + ".join(terms))
    if args.check:
        ok = True
        for v, (lhs, rhs) in enumerate(power_moments(a + [0] * (n + 1 - len(a)), dual.coeffs, args.q, args.k, n)):
            good = lhs == rhs
            ok &= good
            print(f"moment {v}: lhs {_fmt(lhs)} rhs {_fmt(rhs)} {'ok' if good else 'FAIL'}")
        return EXIT_OK if ok else EXIT_MISMATCH
    return EXIT_OK


# -- verify-tables ----------------------------------------------------------


def load_table(name: str) -> dict[tuple[int, int], int]:
    """Vendored ``n k value source`` table as ``{(n, k): value}``."""
    text = resources.files("linclass").joinpath("data", name).read_text(encoding="ascii")
    rows = csv.reader((line for line in text.splitlines() if line and not line.startswith("#")), delimiter="\t")
    next(rows)
    return {(int(r[0]), int(r[1])): int(r[2]) for r in rows}


def _diff(label: str, got: dict, want: dict) -> list[str]:
    bad = []
    for cell in sorted(want):
        if got.get(cell, 0) != want[cell]:
            bad.append(f"{label} {cell}: got {got.get(cell, 0)} expected {want[cell]}")
    return bad


def suite_table1(n_max: int = 12) -> tuple[list[str], bool]:
    want = {c: v for c, v in load_table("binary_d3_counts.tsv").items() if c[0] <= n_max}
    res = classify(ClassificationTask.min_distance(2, 3, n_max, None), count_only=True)
    got = dict(res.counts)
    extra = [f"binary d>=3 {c}: got {v} expected 0" for c, v in sorted(got.items()) if v and c not in want]
    return _diff("binary d>=3", got, want) + extra, res.is_complete()


def suite_table4(n_max: int = 45, k_max: int = 3) -> tuple[list[str], bool]:
    want = {c: v for c, v in load_table("ternary_9div_counts.tsv").items() if c[0] <= n_max and c[1] <= k_max}
    task = ClassificationTask(3, WeightSet.explicit([9, 18, 27, 36, 45, 54]), n_max, k_max)
    res = classify(task, count_only=True)
    return _diff("ternary 9-divisible", dict(res.counts), want), res.is_complete()


def suite_table5(n_max: int = 10) -> tuple[list[str], bool]:
    want = {c: v for c, v in load_table("binary_min_minimal_codewords.tsv").items() if c[0] <= n_max}
    got = min_minimal_codewords_table(n_max)
    extra = [f"minimal codewords {c}: got {v}, no expected value" for c, v in sorted(got.items()) if c not in want]
    return _diff("minimal codewords", got, want) + extra, True


def suite_formula_k2(n_max: int = 16) -> tuple[list[str], bool]:
    res = classify(ClassificationTask.min_distance(2, 3, n_max, 2), count_only=True)
    bad = [
        f"k=2 formula n={n}: classified {res.count(n, 2)} formula {k2_formula(n)}"
        for n in range(5, n_max + 1)
        if res.count(n, 2) != k2_formula(n)
    ]
    return bad, res.is_complete()


SUITES = {
    "table1-small": (suite_table1, 12),
    "table4-k2": (suite_table4, 45),
    "table5-small": (suite_table5, 10),
    "formula-k2": (suite_formula_k2, 16),
}


def cmd_verify_tables(args) -> int:
    names = args.suites or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    status = EXIT_OK
    for name in names:
        fn, default_n = SUITES[name]
        problems, complete = fn(args.nmax or default_n)
        for p in problems:
            print(f"  {p}")
        if problems:
            status = EXIT_MISMATCH
        elif not complete and status == EXIT_OK:
            status = EXIT_PARTIAL
        verdict = "FAIL" if problems else ("PARTIAL" if not complete else "PASS")
        print(f"{name}: {verdict}")
    return status


# -- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--weights", type=_int_list, help="explicit weight set, e.g. 4,6")
    g.add_argument("--d", type=int, help="minimum distance")
    p.add_argument("--even", action="store_true", help="only even weights (with --d)")
    p.add_argument("--no-canonical", action="store_true", help="disable the minimum-multiplicity filter")
    p.add_argument("--no-lex", action="store_true", help="disable the residual enumerator filter")
    p.add_argument("--budget-nodes", type=int, default=None, help="search nodes per extension")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linclass", description="Classify linear codes with prescribed weights.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="classify codes and print a count table")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--kmax", type=int, default=None, help="default: until a dimension is empty")
    p.add_argument("--projective", action="store_true")
    p.add_argument("--max-mult", type=int, default=None)
    p.add_argument("--max-redundancy", type=int, default=None, help="only codes with n - k at most this")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--out", default=None, help="directory for per-cell archives")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--cumulative", action="store_true", help="print counts of length at most n")
    _add_weight_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("extend", help="extend every code of an archive by one dimension")
    p.add_argument("--input", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out", default=None)
    _add_weight_flags(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("invariants", help="report invariants of archived codes")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--aut", action="store_true", help="also compute the automorphism group order")
    p.add_argument("--minimal", action="store_true", help="count minimal codewords also for q > 2")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("macwilliams", help="dual weight distribution")
    p.add_argument("--a", required=True, help="A_0,A_1,... or sparse i:A_i,...")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--check", action="store_true", help="verify the first four power moments")
    p.set_defaults(func=cmd_macwilliams)

    p = sub.add_parser("verify-tables", help="compare classifications with vendored counts")
    p.add_argument("suites", nargs="*", metavar="SUITE", help=", ".join(SUITES))
    p.add_argument("--nmax", type=int, default=None)
    p.set_defaults(func=cmd_verify_tables)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"linclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArchiveError, FileNotFoundError) as exc:
        print(f"linclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
