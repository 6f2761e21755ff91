"""Command-line interface.

Exit codes: 0 verified success, 1 verification failure or no factorization,
2 outside the Q x H scope (or disconnected without ``--components``),
3 exact-solver budget exhausted, 4 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema

from .bench import BENCH_BUDGET, run_bench
from .cayley import build_cayley
from .edge_color import DEFAULT_BUDGET, exact_one_factorize, verify_one_factorization
from .errors import (
    BudgetExceeded,
    CayleyFactorError,
    NotConnectedError,
    OutOfScopeError,
    ParseError,
    PreconditionError,
    SizeLimitError,
)
from .factorizer import (
    FactorizeOutcome,
    Stage,
    factorize_nilpotent,
    replay_certificate,
    replicate_over_cosets,
    verify_factorization,
)
from .formats import (
    GroupSpec,
    factorization_document,
    factorization_from_document,
    graph_document,
    graph_from_document,
    parse_generators,
    to_dot,
)
from .groups import generated_subgroup

EXIT_OK, EXIT_INVALID, EXIT_SCOPE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3, 4


def _err(msg: str) -> None:
    print(f"cayleyfactor: {msg}", file=sys.stderr)


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _resolve(args):
    spec = GroupSpec.parse(args.spec)
    gens = parse_generators(args.gens, spec)
    return spec, build_cayley(spec.group, gens)


def cmd_factorize(args) -> int:
    try:
        spec, gamma = _resolve(args)
    except (ParseError, SizeLimitError, PreconditionError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    g = spec.group
    try:
        if args.exact:
            fact = exact_one_factorize(gamma.graph, args.budget)
            if fact is None:
                _err("the graph has no 1-factorization")
                return EXIT_INVALID
            result = fact
        else:
            sub = generated_subgroup(g, gamma.generators)
            if sub.order != g.order and args.components:
                local = [sub.index_of[s] for s in gamma.generators]
                inner = factorize_nilpotent(sub.as_group, local, args.budget)
                result = replicate_over_cosets(inner.factorization, sub).canonical()
            else:
                result = factorize_nilpotent(g, gamma.generators, args.budget)
    except NotConnectedError as exc:
        _err(f"{exc}; use --components to factorize each component")
        return EXIT_SCOPE
    except OutOfScopeError as exc:
        _err(f"out of scope: {exc}; --exact forces the exact solver")
        return EXIT_SCOPE
    except BudgetExceeded as exc:
        _err(str(exc))
        return EXIT_BUDGET

    fact = result.factorization if isinstance(result, FactorizeOutcome) else result
    report = verify_factorization(gamma, fact)
    if args.format == "dot":
        _write(to_dot(gamma, fact, labels=args.labels), args.out)
    else:
        _write(_dump(factorization_document(gamma, result)), args.out)
    if args.dot:
        Path(args.dot).write_text(to_dot(gamma, fact, labels=args.labels))
    if not report.ok:
        for v in report.violations:
            _err(v.message)
        return EXIT_INVALID
    return EXIT_OK


def cmd_export(args) -> int:
    try:
        _, gamma = _resolve(args)
    except (ParseError, SizeLimitError, PreconditionError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    if args.format == "dot":
        _write(to_dot(gamma, labels=args.labels), args.out)
    else:
        _write(_dump(graph_document(gamma)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        gdoc = json.loads(Path(args.graph).read_text())
        fdoc = json.loads(Path(args.factorization).read_text())
        graph = graph_from_document(gdoc)
        fact = factorization_from_document(fdoc, graph)
        cert = Stage.from_dict(fdoc["certificate"]) if fdoc.get("certificate") else None
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError,
            KeyError, TypeError, ValueError) as exc:
        _err(f"unreadable document: {exc}")
        return EXIT_INPUT
    report = verify_one_factorization(graph, fact, gdoc["valence"])
    if fdoc["valence"] != gdoc["valence"]:
        report.add("header", (), "factorization and graph disagree on the valence")
    if cert is not None:
        if sorted(cert.edges) != list(graph.edges):
            report.add("certificate", (), "certificate root does not describe this graph")
        report.extend(replay_certificate(cert))
    for v in report.violations:
        print(f"{v.kind}: {v.message}")
    if report.ok:
        print("ok")
        return EXIT_OK
    return EXIT_INVALID


def cmd_bench(args) -> int:
    names = [n.strip() for n in args.filter.split(",")] if args.filter else None
    sys.stdout.write(run_bench(args.seed, args.trials, names, args.budget))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleyfactor", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_args(p):
        p.add_argument("--spec", required=True, help='group, e.g. "Z4*Z3" or "Q8*Z3"')
        p.add_argument("--gens", required=True, help='generators, e.g. "1,2" or "(1,1),(0,1)"')
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "dot"), default="json")
        p.add_argument("--labels", action="store_true", help="label DOT vertices by element names")

    p = sub.add_parser("factorize", help="1-factorize a Cayley graph")
    graph_args(p)
    p.add_argument("--dot", help="also write a coloured DOT file here")
    p.add_argument("--exact", action="store_true", help="use the exact solver only")
    p.add_argument("--components", action="store_true",
                   help="factorize each component when S does not generate G")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("export", help="write the Cayley graph as JSON or DOT")
    graph_args(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="check a factorization document against a graph document")
    p.add_argument("graph")
    p.add_argument("factorization")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="CSV benchmark of the pipeline against the exact solver")
    p.add_argument("--filter", help="comma-separated group names, e.g. Z4*Z3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--budget", type=int, default=BENCH_BUDGET)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CayleyFactorError as exc:
        _err(str(exc))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
