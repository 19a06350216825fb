"""Command-line front end.

Exit codes:
    0  success (no violations)
    1  the input could not be parsed
    2  a precondition failed (wrong shape, Schmidt rank, infeasible parameters,
       unknown suite, budget exceeded)
    3  a produced witness failed re-verification (internal error)
    4  an oracle run found violations
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ptrank import io, oracle
from ptrank.analysis import CASES, analyze, analyze_full_schmidt, reduce_sr2
from ptrank.bipartite import BipartiteMatrix, BipartiteShape, LocalEquivWitness, apply_local, schmidt_rank
from ptrank.canonical import gen_full_schmidt_canonical, gen_sr2_case, gen_vector_case
from ptrank.errors import ParseError, PreconditionError, WitnessError, WrongSchmidtRankError
from ptrank.matrix import parse_rational

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PRECONDITION = 2
EXIT_WITNESS = 3
EXIT_VIOLATION = 4


def _emit_json(obj: object) -> None:
    json.dump(obj, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _format_blocks(m: BipartiteMatrix) -> str:
    lines = []
    for i in range(m.shape.m1):
        for j in range(m.shape.n1):
            lines.append(f"block ({i},{j}):")
            lines.extend("  " + row for row in m.block(i, j).pretty().splitlines())
    return "\n".join(lines)


def _witness_lines(w: LocalEquivWitness) -> list[str]:
    lines = []
    for name, mat in (("P1", w.p1), ("P2", w.p2), ("Q1", w.q1), ("Q2", w.q2)):
        lines.append(f"{name}:")
        lines.extend("  " + row for row in mat.pretty().splitlines())
    return lines


# analyze


def cmd_analyze(args: argparse.Namespace) -> int:
    m = io.load(args.path)
    report = analyze(m, case=args.case, system=args.system)
    if args.json:
        _emit_json({"schema": io.SCHEMA_VERSION, "input": str(args.path), **report.to_dict()})
        return EXIT_OK
    print(report.summary())
    print(f"analyzer: {report.details.get('analyzer', args.case)}")
    for key, value in report.details.items():
        if key != "analyzer":
            print(f"  {key}: {value}")
    if report.witness is not None:
        print("witness:")
        print("\n".join("  " + line for line in _witness_lines(report.witness)))
    return EXIT_OK


# generate


def _generate(args: argparse.Namespace) -> BipartiteMatrix:
    if args.family == "full-schmidt":
        return gen_full_schmidt_canonical(args.m1, args.n1, args.r)
    if args.family == "vector":
        n2 = args.n2 if args.n2 is not None else args.d
        rs, ss = gen_vector_case(args.K, args.m2, n2, args.d)
        return BipartiteMatrix.from_terms(list(zip(rs, ss)))
    n2 = args.n2 if args.n2 is not None else args.d
    return gen_sr2_case(args.case, args.m2, n2, args.d)


def cmd_generate(args: argparse.Namespace) -> int:
    m = _generate(args)
    text = io.dumps(m)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.family} document with shape {m.shape} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# reduce


def cmd_reduce(args: argparse.Namespace) -> int:
    m = io.load(args.path)
    s = m.shape
    mode = args.mode
    if mode == "auto":
        sr = schmidt_rank(m)
        if sr == 2:
            mode = "sr2"
        elif sr == s.m1 * s.n1:
            mode = "full-schmidt"
        else:
            raise WrongSchmidtRankError(
                f"Schmidt rank {sr} matches no reduction (need 2 or m1*n1 = {s.m1 * s.n1})"
            )
    params: dict = {}
    if mode == "sr2":
        red = reduce_sr2(m)
        reduced, witness = red.reduced, red.witness
        params = red.parameters()
    else:
        report, witness = analyze_full_schmidt(m)
        if witness is None:
            raise PreconditionError("the matrix does not attain the bound, so it has no canonical form")
        reduced = apply_local(witness, m)
        params = {"r": report.rank}
    ok = apply_local(witness, m) == reduced
    if args.json:
        _emit_json({
            "schema": io.SCHEMA_VERSION,
            "mode": mode,
            "parameters": params,
            "reduced": io.to_document(reduced),
            "witness": oracle.encode(witness),
            "witness_check": "OK" if ok else "FAIL",
        })
    else:
        print(f"mode: {mode}")
        if params:
            print("parameters: " + ", ".join(f"{k}={v}" for k, v in params.items()))
        print("reduced:")
        print("\n".join("  " + line for line in _format_blocks(reduced).splitlines()))
        print("witness:")
        print("\n".join("  " + line for line in _witness_lines(witness)))
        print(f"witness check: {'OK' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_WITNESS


# fuzz / oracle


def _parse_shape(text: str) -> BipartiteShape:
    try:
        dims = [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"invalid shape {text!r}; expected m1,n1,m2,n2") from None
    if len(dims) != 4:
        raise ParseError(f"invalid shape {text!r}; expected four integers")
    try:
        return BipartiteShape(*dims)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def _parse_entries(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(x) for x in text.split(","))


def _build_space(args: argparse.Namespace, prop: oracle.Property) -> oracle.SearchSpace | None:
    base = prop.default_space
    if args.shape is None and args.entries is None:
        return base
    shape = _parse_shape(args.shape) if args.shape else (base.shape if base else None)
    if shape is None:
        raise PreconditionError(f"suite {prop.name!r} needs --shape")
    entries = _parse_entries(args.entries) if args.entries else (base.entry_set if base else (Fraction(0), Fraction(1)))
    flt = base.filter if base is not None else None
    return oracle.SearchSpace(shape, entries, flt)


def cmd_suite(args: argparse.Namespace) -> int:
    if args.list:
        for name in oracle.suite_names():
            prop = oracle.get_property(name)
            tag = " (experimental)" if prop.experimental else ""
            print(f"{name}{tag}: {prop.description}")
        return EXIT_OK
    if not args.suite:
        raise PreconditionError("--suite is required (use --list to see suites)")
    prop = oracle.get_property(args.suite)
    space = _build_space(args, prop)
    exhaustive = args.exhaustive or (
        args.command == "oracle" and prop.default_mode == "exhaustive" and args.trials is None
    )
    if exhaustive:
        if space is None:
            raise PreconditionError(f"suite {prop.name!r} has no enumerable space; pass --shape")
        report = oracle.exhaustive_check(space, prop, workers=args.workers)
    else:
        trials = args.trials if args.trials is not None else prop.default_trials
        report = oracle.random_check(space, prop, trials, args.seed)
    if args.json:
        _emit_json(report.to_dict())
    else:
        print(report.summary())
    if not report.passed:
        path = Path(args.counterexamples or f"counterexamples-{prop.name}.json")
        path.write_text(json.dumps(report.to_dict(), indent=1) + "\n", encoding="utf-8")
        print(f"counterexamples written to {path}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptrank",
        description="Exact rank analysis of bipartite matrices and their partial transposes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="check the inequality and classify a matrix document")
    p.add_argument("path", help="matrix document (JSON)")
    p.add_argument("--system", choices=("A", "B"), default="B", help="partial transpose system (default B)")
    p.add_argument("--case", choices=CASES, default="auto", help="analyzer to run (default auto)")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="write a canonical saturating matrix document")
    p.add_argument("--family", choices=("full-schmidt", "vector", "sr2"), required=True)
    p.add_argument("--m1", type=int, default=2)
    p.add_argument("--n1", type=int, default=2)
    p.add_argument("--r", type=int, default=1, help="identity rank for full-schmidt")
    p.add_argument("--K", type=int, default=2, help="number of terms for vector")
    p.add_argument("--m2", type=int, default=2)
    p.add_argument("--n2", type=int, default=None, help="defaults to --d")
    p.add_argument("--d", type=int, default=1, help="common stacked rank")
    p.add_argument("--case", choices=("i", "ii"), default="i", help="pattern for sr2")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="reduce a matrix and print the witness")
    p.add_argument("path")
    p.add_argument("--mode", choices=("auto", "sr2", "full-schmidt"), default="auto")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reduce)

    for name, text in (("fuzz", "run a suite on random instances"), ("oracle", "run a suite in its default mode")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--suite")
        p.add_argument("--list", action="store_true", help="list registered suites")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--exhaustive", action="store_true")
        p.add_argument("--shape", help="m1,n1,m2,n2")
        p.add_argument("--entries", help="comma-separated rationals, e.g. 0,1 or -1,0,1/2")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--counterexamples", help="where to write violations")
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=cmd_suite)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except WitnessError as exc:
        print(f"witness verification failed: {exc}", file=sys.stderr)
        return EXIT_WITNESS


if __name__ == "__main__":
    sys.exit(main())
