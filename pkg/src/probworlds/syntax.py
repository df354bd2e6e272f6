"""Formulas of a function-free first-order language over a finite constant set.

Propositional symbols are 0-ary predicates, so the same machinery covers
both the propositional and the first-order case.  Formula nodes are frozen
dataclasses; the operators ``&``, ``|`` and ``~`` build conjunctions,
disjunctions and negations.

Grammar (loosest to tightest binding)::

    formula := quant | iff
    quant   := ("forall" | "exists") IDENT "." formula
    iff     := implies ("<->" implies)*          left-associative
    implies := or ("->" implies)?                right-associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | quant | primary
    primary := "true" | "false" | "(" formula ")" | IDENT ["(" term ("," term)* ")"]

A quantifier body extends as far to the right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import (
    ArityMismatchError,
    FormulaSyntaxError,
    NotASentenceError,
    UnknownPredicateError,
)

KEYWORDS = frozenset({"forall", "exists", "true", "false"})
IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Signature:
    """Predicates with their arities plus the ordered constant domain.

    Declaration order is kept; it fixes the ground-atom indexing downstream.
    """

    predicates: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    _arity: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "predicates", tuple((str(n), int(a)) for n, a in self.predicates))
        object.__setattr__(self, "constants", tuple(str(c) for c in self.constants))
        arity = {}
        for name, a in self.predicates:
            _check_ident(name, "predicate")
            if a < 0:
                raise ValueError(f"predicate {name} has negative arity {a}")
            if name in arity:
                raise ValueError(f"duplicate predicate {name!r}")
            arity[name] = a
        seen = set()
        for c in self.constants:
            _check_ident(c, "constant")
            if c in seen:
                raise ValueError(f"duplicate constant {c!r}")
            seen.add(c)
        object.__setattr__(self, "_arity", arity)

    @classmethod
    def propositional(cls, *names: str) -> "Signature":
        return cls(tuple((n, 0) for n in names), ())

    def arity(self, name: str) -> int | None:
        return self._arity.get(name)

    def has_constant(self, name: str) -> bool:
        return name in self.constants

    def with_constants(self, constants: Iterable[str]) -> "Signature":
        return Signature(self.predicates, tuple(constants))

    def __str__(self):
        preds = ", ".join(f"{n}/{a}" for n, a in self.predicates)
        return f"predicates: {preds}; domain: {', '.join(self.constants)}"


def _check_ident(name, kind):
    if not IDENT_RE.match(name) or name in KEYWORDS:
        raise ValueError(f"invalid {kind} name {name!r}")


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


# -- formulas ----------------------------------------------------------------


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def implies(self, other):
        return Implies(self, other)

    def iff(self, other):
        return Iff(self, other)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "FALSE"


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True)
class Atom(Formula):
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def is_ground(self) -> bool:
        return all(isinstance(t, Const) for t in self.args)


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (ForAll, Exists)


def atom(predicate: str, *args: str | Term) -> Atom:
    """Shorthand: plain strings become constants."""
    return Atom(predicate, tuple(Const(a) if isinstance(a, str) else a for a in args))


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``TRUE``."""
    result = None
    for p in parts:
        result = p if result is None else And(result, p)
    return TRUE if result is None else result


def disjoin(parts: Iterable[Formula]) -> Formula:
    result = None
    for p in parts:
        result = p if result is None else Or(result, p)
    return FALSE if result is None else result


# -- traversal -----------------------------------------------------------------


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Var))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, BINARY):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_variables(f.body) - {f.var}
    return frozenset()


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def require_sentence(f: Formula) -> Formula:
    free = free_variables(f)
    if free:
        raise NotASentenceError(
            f"{to_text(f)!r} is not a sentence: free variable(s) {', '.join(sorted(free))}"
        )
    return f


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, QUANTIFIERS):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, BINARY):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


def iter_atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from iter_atoms(f.body)
    elif isinstance(f, BINARY):
        yield from iter_atoms(f.left)
        yield from iter_atoms(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from iter_atoms(f.body)


def substitute(f: Formula, var: str, term: Const | str) -> Formula:
    """Replace every free occurrence of ``var`` by the constant ``term``."""
    if isinstance(term, str):
        term = Const(term)
    if not isinstance(term, Const):
        raise TypeError("only ground substitution (a constant) is supported")
    return _subst(f, var, term)


def _subst(f, var, term):
    if isinstance(f, Atom):
        if not any(isinstance(t, Var) and t.name == var for t in f.args):
            return f
        return Atom(f.predicate, tuple(term if isinstance(t, Var) and t.name == var else t for t in f.args))
    if isinstance(f, Not):
        body = _subst(f.body, var, term)
        return f if body is f.body else Not(body)
    if isinstance(f, BINARY):
        left, right = _subst(f.left, var, term), _subst(f.right, var, term)
        if left is f.left and right is f.right:
            return f
        return type(f)(left, right)
    if isinstance(f, QUANTIFIERS):
        if f.var == var:
            return f
        body = _subst(f.body, var, term)
        return f if body is f.body else type(f)(f.var, body)
    return f


def check_formula(f: Formula, sig: Signature) -> Formula:
    """Validate predicate names and arities of a programmatically built formula."""
    for a in iter_atoms(f):
        arity = sig.arity(a.predicate)
        if arity is None:
            raise UnknownPredicateError(f"unknown predicate {a.predicate!r}")
        if arity != len(a.args):
            raise ArityMismatchError(
                f"predicate {a.predicate} expects {arity} argument(s), got {len(a.args)}"
            )
        for t in a.args:
            if isinstance(t, Const) and not sig.has_constant(t.name):
                raise FormulaSyntaxError(f"unknown constant {t.name!r}")
    return f


# -- printing ------------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_ATOMIC_PREC = 6


def _prec(f):
    if isinstance(f, QUANTIFIERS):
        return 0
    if isinstance(f, BINARY):
        return _PREC[type(f)]
    if isinstance(f, Not):
        return 5
    return _ATOMIC_PREC


def to_text(f: Formula) -> str:
    """Print ``f`` in the ASCII grammar with minimal parentheses.

    Parsing the result yields a structurally equal formula.
    """
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        if not f.args:
            return f.predicate
        return f"{f.predicate}({', '.join(t.name for t in f.args)})"
    if isinstance(f, Not):
        inner = to_text(f.body)
        if _prec(f.body) < 5:
            inner = f"({inner})"
        return "~" + inner
    if isinstance(f, QUANTIFIERS):
        kw = "forall" if isinstance(f, ForAll) else "exists"
        return f"{kw} {f.var}. {to_text(f.body)}"
    p = _PREC[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    right_assoc = isinstance(f, Implies)
    if lp < p or (lp == p and right_assoc):
        left = f"({left})"
    if rp < p or (rp == p and not right_assoc):
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


# -- parsing -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|[~&|(),.])|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<bad>\S))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "ident", "kw", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        if m.group("bad") is not None:
            raise FormulaSyntaxError("unexpected character", m.start("bad"), m.group("bad"))
        if m.group("op") is not None:
            tokens.append(Token("op", m.group("op"), m.start("op")))
        else:
            word = m.group("ident")
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, m.start("ident")))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, sig):
        self.tokens = tokenize(text)
        self.i = 0
        self.sig = sig

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text):
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message):
        t = self.tok
        if t.kind == "end":
            raise FormulaSyntaxError(f"{message}, found end of input", t.pos)
        raise FormulaSyntaxError(message, t.pos, t.text)

    def parse(self):
        f = self.formula(frozenset())
        if self.tok.kind != "end":
            self.fail("unexpected token")
        return f

    def formula(self, bound):
        if self.at("forall") or self.at("exists"):
            return self.quant(bound)
        return self.iff(bound)

    def quant(self, bound):
        kw = self.advance()
        if self.tok.kind != "ident":
            self.fail("expected a variable name")
        var = self.advance()
        if self.sig.has_constant(var.text):
            raise FormulaSyntaxError(
                f"{var.text!r} is a declared constant and cannot be bound", var.pos, var.text
            )
        self.expect(".")
        body = self.formula(bound | {var.text})
        return (ForAll if kw.text == "forall" else Exists)(var.text, body)

    def iff(self, bound):
        f = self.implies(bound)
        while self.at("<->"):
            self.advance()
            f = Iff(f, self.implies(bound))
        return f

    def implies(self, bound):
        f = self.disj(bound)
        if self.at("->"):
            self.advance()
            f = Implies(f, self.implies(bound))
        return f

    def disj(self, bound):
        f = self.conj(bound)
        while self.at("|"):
            self.advance()
            f = Or(f, self.conj(bound))
        return f

    def conj(self, bound):
        f = self.unary(bound)
        while self.at("&"):
            self.advance()
            f = And(f, self.unary(bound))
        return f

    def unary(self, bound):
        if self.at("~"):
            self.advance()
            return Not(self.unary(bound))
        if self.at("forall") or self.at("exists"):
            return self.quant(bound)
        return self.primary(bound)

    def primary(self, bound):
        t = self.tok
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("false"):
            self.advance()
            return FALSE
        if self.at("("):
            self.advance()
            f = self.formula(bound)
            self.expect(")")
            return f
        if t.kind != "ident":
            self.fail("expected a formula")
        self.advance()
        arity = self.sig.arity(t.text)
        if arity is None:
            raise UnknownPredicateError(f"unknown predicate {t.text!r}", t.pos, t.text)
        args = []
        if self.at("("):
            self.advance()
            args.append(self.term(bound))
            while self.at(","):
                self.advance()
                args.append(self.term(bound))
            self.expect(")")
        if len(args) != arity:
            raise ArityMismatchError(
                f"predicate {t.text} expects {arity} argument(s), got {len(args)}", t.pos, t.text
            )
        return Atom(t.text, tuple(args))

    def term(self, bound):
        t = self.tok
        if t.kind != "ident":
            self.fail("expected a term")
        self.advance()
        if t.text in bound:
            return Var(t.text)
        if self.sig.has_constant(t.text):
            return Const(t.text)
        return Var(t.text)


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse ``text`` against ``sig``.

    Identifiers in argument position are constants when declared in the
    signature and not shadowed by a quantifier; anything else is a variable.
    """
    return _Parser(text, sig).parse()


def parse_sentence(text: str, sig: Signature) -> Formula:
    return require_sentence(parse_formula(text, sig))
