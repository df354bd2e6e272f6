"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 invariant violation,
4 inconsistent knowledge base, 5 world space over the cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .defaults import ANOMALY_COLUMNS, anomaly, anomaly_rows, penguin_chain
from .entailment import compile_kb, is_consistent, query_bounds
from .errors import (
    DistributionError,
    EmptyDomainError,
    EvaluationError,
    FormulaSyntaxError,
    InconsistentKnowledgeBaseError,
    KBFileError,
    KnowledgeBaseError,
    NotASentenceError,
    ProbWorldsError,
    SignatureMismatchError,
    WorldSpaceTooLargeError,
)
from .kb import describe
from .kbfile import load_distribution, load_kb
from .measure import Distribution, probability
from .quantifiers import certain_universal_facts, check_quantifier_monotonicity, expand
from .rationals import fmt, fmt_with_decimal, to_fraction
from .syntax import parse_formula, require_sentence, to_text
from .worlds import DEFAULT_MAX_ATOMS, WorldSpace, truth_vector

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_INCONSISTENT, EXIT_CAP = 0, 2, 3, 4, 5


def _domain_line(space: WorldSpace) -> str:
    n = len(space.signature.constants)
    return f"domain size {n} ({space.n_atoms} ground atoms, {space.size} worlds)"


def _dump_witness(title, d, out):
    print(title, file=out)
    for line in d.dump().splitlines():
        print(f"  {line}", file=out)
    for k in d.support:
        print(f"  {d.space[k]}", file=out)


def _query(text, sig):
    return require_sentence(parse_formula(text, sig))


def _rational_arg(text):
    try:
        return to_fraction(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _rational_list(text):
    return [_rational_arg(t) for t in text.split(",") if t.strip()]


def _int_list(text):
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("terms must be positive integers")
    return values


def cmd_eval(args, out):
    kb = load_kb(args.kb) if args.kb else None
    d = load_distribution(args.dist, kb.signature if kb else None, args.max_atoms)
    sig = d.space.signature
    q = _query(args.query, sig)
    ground = expand(q, sig.constants)
    value = probability(d, ground)
    print(fmt_with_decimal(value), file=out)
    print(_domain_line(d.space), file=out)
    if args.explain:
        print(f"expanded query: {to_text(ground)}", file=out)
        holds = truth_vector(ground, d.space)
        for k, w in d.support.items():
            mark = "+" if holds[k] else " "
            print(f"  {mark} w {k} {fmt(w)}    {d.space[k].describe()}", file=out)
    return EXIT_OK


def cmd_bounds(args, out):
    kb = load_kb(args.kb, args.require_positive_conditions)
    q = _query(args.query, kb.signature)
    compiled = compile_kb(kb, args.max_atoms)
    b = query_bounds(kb, q, compiled=compiled)
    print(str(b), file=out)
    print(_domain_line(compiled.space), file=out)
    if kb.uses_strict:
        print("note: strict inequalities are compiled as non-strict", file=out)
    if args.explain:
        print(f"expanded query: {to_text(b.ground_query)}", file=out)
        print(f"constraints: {b.n_constraints} (including normalization)", file=out)
        _dump_witness(f"lower bound {fmt(b.lo)} attained by:", b.lo_witness, out)
        _dump_witness(f"upper bound {fmt(b.hi)} attained by:", b.hi_witness, out)
        facts = certain_universal_facts(kb)
        if facts:
            print("derived from certain universals:", file=out)
            for f in facts:
                print(f"  {f}", file=out)
    return EXIT_OK


def cmd_consistent(args, out):
    kb = load_kb(args.kb, args.require_positive_conditions)
    result = is_consistent(kb, args.max_atoms)
    if result.consistent:
        print("CONSISTENT", file=out)
        print(_domain_line(result.witness.space), file=out)
        if args.explain:
            _dump_witness("witness:", result.witness, out)
        return EXIT_OK
    print("INCONSISTENT", file=out)
    print(result.note, file=out)
    for a in result.clashing:
        print(f"  clash: {describe(a)}", file=out)
    return EXIT_INCONSISTENT


def cmd_anomaly(args, out):
    reports = [anomaly(eps, n, args.max_atoms) for eps in args.epsilon for n in args.terms]
    rows = anomaly_rows(reports)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(ANOMALY_COLUMNS)
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        table = [ANOMALY_COLUMNS] + rows
        widths = [max(len(r[i]) for r in table) for i in range(len(ANOMALY_COLUMNS))]
        for r in table:
            print("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip(), file=out)
    if args.explain:
        for eps in args.epsilon:
            print(file=out)
            for line in penguin_chain(eps).lines():
                print(line, file=out)
    return EXIT_OK


def cmd_gaifman(args, out):
    if args.kb:
        kb = load_kb(args.kb)
        sig = kb.signature
    else:
        kb, sig = None, None
    if args.dist:
        d = load_distribution(args.dist, sig, args.max_atoms)
        source = "given distribution"
    elif kb is not None and kb.assertions:
        result = is_consistent(kb, args.max_atoms)
        if not result.consistent:
            raise InconsistentKnowledgeBaseError(result.note, result.clashing)
        d, source = result.witness, "knowledge-base witness"
    elif kb is not None:
        d, source = Distribution.uniform(WorldSpace(sig, args.max_atoms)), "uniform distribution"
    else:
        raise KBFileError("gaifman needs --kb or --dist")
    f = _query(args.query, d.space.signature)
    report = check_quantifier_monotonicity(d, f)
    for line in report.lines():
        print(line, file=out)
    print(f"{_domain_line(d.space)}; {source}", file=out)
    return EXIT_OK if report.passed else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS,
                        help=f"cap on ground atoms, i.e. 2^cap worlds (default {DEFAULT_MAX_ATOMS})")
    common.add_argument("--explain", action="store_true", help="print expansions and witnesses")

    parser = argparse.ArgumentParser(prog="probworlds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="probability of a sentence under a given distribution")
    p.add_argument("--kb", help="knowledge-base file supplying the signature")
    p.add_argument("--dist", required=True, help="distribution file")
    p.add_argument("--query", required=True)
    p.set_defaults(func=cmd_eval)

    floor = dict(type=_rational_arg, default=None, metavar="DELTA",
                 help="also require p[condition] >= DELTA for every conditional assertion")

    p = sub.add_parser("bounds", parents=[common], help="tight probability bounds for a query")
    p.add_argument("--kb", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--require-positive-conditions", **floor)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("consistent", parents=[common], help="check that some distribution satisfies the KB")
    p.add_argument("--kb", required=True)
    p.add_argument("--require-positive-conditions", **floor)
    p.set_defaults(func=cmd_consistent)

    p = sub.add_parser("anomaly", parents=[common], help="penguin default anomaly table")
    p.add_argument("--epsilon", type=_rational_list, default=[_rational_arg("1/100")],
                   help="comma-separated epsilons (default 1/100)")
    p.add_argument("--terms", type=_int_list, default=[1], help="comma-separated domain sizes (default 1)")
    p.add_argument("--format", choices=("human", "csv"), default="human")
    p.set_defaults(func=cmd_anomaly)

    p = sub.add_parser("gaifman", parents=[common], help="quantifier monotonicity and duality check")
    p.add_argument("--kb")
    p.add_argument("--dist")
    p.add_argument("--query", required=True, help="sentence with a top-level quantifier")
    p.set_defaults(func=cmd_gaifman)
    return parser


_PARSE_ERRORS = (KBFileError, FormulaSyntaxError, NotASentenceError, KnowledgeBaseError)
_INVARIANT_ERRORS = (DistributionError, SignatureMismatchError, EmptyDomainError, EvaluationError)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except WorldSpaceTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InconsistentKnowledgeBaseError as exc:
        print("INCONSISTENT", file=out)
        print(exc.note, file=out)
        for a in exc.clashing:
            print(f"  clash: {describe(a)}", file=out)
        return EXIT_INCONSISTENT
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _INVARIANT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ProbWorldsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
