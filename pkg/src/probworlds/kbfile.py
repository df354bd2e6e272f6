"""Reading knowledge-base and distribution files.

A knowledge-base file::

    # comments run to end of line
    predicates: Bird/1, Fly/1, Penguin/1
    domain: t1, t2
    epsilon: 1/100
    P(forall x. Penguin(x) -> Bird(x)) = 1
    P(Fly(x) | Bird(x)) ~= 1 for all x
    P(A) in [1/4, 1/2]

Inside ``P(...)`` a ``|`` outside any parentheses is the conditioning bar;
parenthesise a top-level disjunction: ``P((A | B)) = 4/5``.

A distribution file holds either ``w <index> <rational>`` lines (missing
worlds have weight 0) or ``<atom sentence> = <rational>`` lines covering
every world.  It may carry its own ``predicates:``/``domain:`` headers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .errors import KBFileError, ProbWorldsError
from .kb import ConditionalBound, Interval, KnowledgeBase, Origin, Point, Schema
from .lp import EQ, GE, LE
from .measure import Distribution, from_atom_probs
from .rationals import to_fraction
from .syntax import Signature, parse_formula
from .worlds import DEFAULT_MAX_ATOMS, WorldSpace

HEADERS = ("predicates", "domain", "epsilon")
_HEADER_RE = re.compile(r"([A-Za-z]+)\s*:(.*)\Z")
_SCHEMA_RE = re.compile(r"(.*?)\s+for\s+all\s+([A-Za-z][A-Za-z0-9_]*)\s*\Z")
_PRED_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\s*/\s*(\d+)\Z")
_REL_RE = re.compile(r"(~=|≈|>=|<=|≥|≤|=|>|<|in\b)\s*(.*)\Z")
_INTERVAL_RE = re.compile(r"\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]\Z")
_UNICODE = {"≈": "~=", "≥": ">=", "≤": "<="}


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _rational(text, path, lineno):
    try:
        return to_fraction(text)
    except (ValueError, TypeError):
        raise KBFileError(f"not a rational number: {text.strip()!r}", path, lineno) from None


def read_headers(lines, path=None) -> tuple[dict, list[tuple[int, str]]]:
    """Split into header values and remaining ``(lineno, text)`` lines."""
    headers, rest = {}, []
    for lineno, raw in enumerate(lines, 1):
        text = _strip(raw)
        if not text:
            continue
        m = _HEADER_RE.match(text)
        if m and m.group(1).lower() in HEADERS:
            key = m.group(1).lower()
            if key in headers:
                raise KBFileError(f"duplicate '{key}:' line", path, lineno)
            headers[key] = (lineno, m.group(2).strip())
        else:
            rest.append((lineno, text))
    return headers, rest


def signature_from_headers(headers, path=None) -> Signature:
    if "predicates" not in headers:
        raise KBFileError("missing 'predicates:' line", path)
    lineno, text = headers["predicates"]
    preds = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        m = _PRED_RE.match(item)
        if not m:
            raise KBFileError(f"predicate must be written name/arity, got {item!r}", path, lineno)
        preds.append((m.group(1), int(m.group(2))))
    consts = ()
    if "domain" in headers:
        dline, dtext = headers["domain"]
        consts = tuple(filter(None, (s.strip() for s in dtext.split(","))))
        lineno = dline
    try:
        return Signature(tuple(preds), consts)
    except ValueError as exc:
        raise KBFileError(str(exc), path, lineno) from None


def _split_probability(text, path, lineno):
    """``P( body ) tail`` -> (body, tail)."""
    if not text.startswith("P("):
        raise KBFileError("expected an assertion of the form P(...) <relation> <value>", path, lineno)
    depth = 0
    for i in range(1, len(text)):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return text[2:i], text[i + 1:].strip()
    raise KBFileError("unbalanced parentheses in P(...)", path, lineno)


def _split_condition(body):
    """Top-level ``|`` positions separate target and condition."""
    depth, bars = 0, []
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "|" and depth == 0:
            bars.append(i)
    return bars


def parse_assertion(text: str, sig: Signature, epsilon=None, path=None, lineno=None):
    """One assertion line to a Point, Interval, ConditionalBound or Schema."""
    origin = Origin(lineno, text, path)
    schema_var = None
    m = _SCHEMA_RE.match(text)
    if m:
        text_core, schema_var = m.group(1).strip(), m.group(2)
    else:
        text_core = text
    body, tail = _split_probability(text_core, path, lineno)
    bars = _split_condition(body)
    if len(bars) > 1:
        raise KBFileError(
            "more than one top-level '|' inside P(...); parenthesise disjunctions", path, lineno
        )

    def formula(src):
        try:
            return parse_formula(src, sig)
        except ProbWorldsError as exc:
            raise KBFileError(f"in {src.strip()!r}: {exc}", path, lineno) from None

    if bars:
        target, condition = formula(body[: bars[0]]), formula(body[bars[0] + 1:])
    else:
        target, condition = formula(body), None

    rm = _REL_RE.match(tail)
    if not rm:
        raise KBFileError(f"expected a relation (=, >=, <=, >, <, ~=, in) after P(...), got {tail!r}", path, lineno)
    rel, value_text = _UNICODE.get(rm.group(1), rm.group(1)), rm.group(2).strip()
    strict = rel in (">", "<")

    try:
        if rel == "in":
            im = _INTERVAL_RE.match(value_text)
            if not im:
                raise KBFileError("expected '[lo, hi]' after 'in'", path, lineno)
            lo, hi = _rational(im.group(1), path, lineno), _rational(im.group(2), path, lineno)
            if condition is not None:
                raise KBFileError("conditional intervals are not supported; write two lines", path, lineno)
            simple = Interval(target, lo, hi, origin=origin)
        else:
            value = _rational(value_text, path, lineno)
            if rel == "~=":
                if epsilon is None:
                    raise KBFileError("'~=' needs an 'epsilon:' line", path, lineno)
                if value == 1:
                    rel, value = GE, 1 - epsilon
                elif value == 0:
                    rel, value = LE, epsilon
                else:
                    raise KBFileError("'~=' is only defined for 0 and 1", path, lineno)
            rel = {">": GE, "<": LE}.get(rel, rel)
            if condition is not None:
                simple = ConditionalBound(target, condition, rel, value, strict, origin)
            elif rel == EQ:
                simple = Point(target, value, origin)
            elif rel == GE:
                simple = Interval(target, value, Fraction(1), strict, origin)
            else:
                simple = Interval(target, Fraction(0), value, strict, origin)
        if schema_var is not None:
            return Schema(schema_var, simple, origin)
        return simple
    except KBFileError:
        raise
    except ProbWorldsError as exc:
        raise KBFileError(str(exc), path, lineno) from None


def parse_kb(text: str, path: str | None = None, positive_condition_floor=None) -> KnowledgeBase:
    headers, rest = read_headers(text.splitlines(), path)
    sig = signature_from_headers(headers, path)
    epsilon = None
    if "epsilon" in headers:
        lineno, etext = headers["epsilon"]
        epsilon = _rational(etext, path, lineno)
        if not 0 < epsilon < 1:
            raise KBFileError("epsilon must lie strictly between 0 and 1", path, lineno)
    assertions = [parse_assertion(t, sig, epsilon, path, n) for n, t in rest]
    try:
        return KnowledgeBase(sig, tuple(assertions), epsilon, positive_condition_floor, path)
    except ProbWorldsError as exc:
        raise KBFileError(str(exc), path) from None


def load_kb(path, positive_condition_floor=None) -> KnowledgeBase:
    path = str(path)
    return parse_kb(Path(path).read_text(encoding="utf-8"), path, positive_condition_floor)


_W_RE = re.compile(r"w\s+(\d+)\s+(\S+)\Z")


def parse_distribution(text: str, sig: Signature | None = None, path: str | None = None,
                       max_atoms: int = DEFAULT_MAX_ATOMS) -> Distribution:
    headers, rest = read_headers(text.splitlines(), path)
    if "predicates" in headers:
        sig = signature_from_headers(headers, path)
    if sig is None:
        raise KBFileError("no signature: pass a knowledge base or add 'predicates:' to the file", path)
    space = WorldSpace(sig, max_atoms)
    indexed, by_atom = {}, {}
    for lineno, line in rest:
        m = _W_RE.match(line)
        if m:
            k = int(m.group(1))
            if k in indexed:
                raise KBFileError(f"world {k} listed twice", path, lineno)
            indexed[k] = _rational(m.group(2), path, lineno)
            continue
        if "=" not in line:
            raise KBFileError("expected 'w <index> <rational>' or '<atom sentence> = <rational>'", path, lineno)
        lhs, rhs = line.rsplit("=", 1)
        try:
            f = parse_formula(lhs, sig)
        except ProbWorldsError as exc:
            raise KBFileError(str(exc), path, lineno) from None
        if f in by_atom:
            raise KBFileError(f"atom sentence {lhs.strip()!r} listed twice", path, lineno)
        by_atom[f] = _rational(rhs, path, lineno)
    if indexed and by_atom:
        raise KBFileError("mixing 'w' lines and atom-sentence lines is not allowed", path)
    if by_atom:
        return from_atom_probs(by_atom, space)
    return Distribution(space, indexed)


def load_distribution(path, sig: Signature | None = None, max_atoms: int = DEFAULT_MAX_ATOMS) -> Distribution:
    path = str(path)
    return parse_distribution(Path(path).read_text(encoding="utf-8"), sig, path, max_atoms)
