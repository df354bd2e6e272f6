"""Probability assertions and knowledge bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from .errors import KnowledgeBaseError
from .lp import EQ, GE, LE, RELATIONS
from .rationals import fmt, to_fraction
from .syntax import Formula, Signature, check_formula, free_variables, substitute, to_text


def _unit(value, what):
    q = to_fraction(value)
    if not 0 <= q <= 1:
        raise KnowledgeBaseError(f"{what} {fmt(q)} outside [0, 1]")
    return q


@dataclass(frozen=True)
class Origin:
    """Where an assertion came from, for error messages."""

    line: int | None = None
    text: str | None = None
    path: str | None = None

    def __str__(self):
        where = f"{self.path}:{self.line}" if self.path else f"line {self.line}"
        return f"{where}: {self.text}" if self.text else where


@dataclass(frozen=True)
class Point:
    sentence: Formula
    value: Fraction
    origin: Origin | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "value", _unit(self.value, "probability"))

    def formulas(self):
        return (self.sentence,)

    def instantiate(self, var, const):
        return Point(substitute(self.sentence, var, const), self.value, self.origin)

    def render(self):
        return f"P({to_text(self.sentence)}) = {fmt(self.value)}"


@dataclass(frozen=True)
class Interval:
    sentence: Formula
    lo: Fraction
    hi: Fraction
    strict: bool = False
    origin: Origin | None = field(default=None, compare=False)

    def __post_init__(self):
        lo, hi = _unit(self.lo, "lower bound"), _unit(self.hi, "upper bound")
        if lo > hi:
            raise KnowledgeBaseError(f"empty interval [{fmt(lo)}, {fmt(hi)}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def formulas(self):
        return (self.sentence,)

    def instantiate(self, var, const):
        return Interval(substitute(self.sentence, var, const), self.lo, self.hi, self.strict, self.origin)

    def render(self):
        s = to_text(self.sentence)
        if self.hi == 1 and self.lo > 0:
            return f"P({s}) >= {fmt(self.lo)}"
        if self.lo == 0 and self.hi < 1:
            return f"P({s}) <= {fmt(self.hi)}"
        return f"P({s}) in [{fmt(self.lo)}, {fmt(self.hi)}]"


@dataclass(frozen=True)
class ConditionalBound:
    """``p[target | condition] <relation> threshold``, compiled linearly."""

    target: Formula
    condition: Formula
    relation: str
    threshold: Fraction
    strict: bool = False
    origin: Origin | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise KnowledgeBaseError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "threshold", _unit(self.threshold, "threshold"))

    def formulas(self):
        return (self.target, self.condition)

    def instantiate(self, var, const):
        return ConditionalBound(
            substitute(self.target, var, const),
            substitute(self.condition, var, const),
            self.relation,
            self.threshold,
            self.strict,
            self.origin,
        )

    def render(self):
        return f"P({to_text(self.target)} | {to_text(self.condition)}) {self.relation} {fmt(self.threshold)}"


Simple = Union[Point, Interval, ConditionalBound]


@dataclass(frozen=True)
class Schema:
    """A template with one free variable, asserted for every domain constant."""

    var: str
    template: Simple
    origin: Origin | None = field(default=None, compare=False)

    def __post_init__(self):
        if isinstance(self.template, Schema):
            raise KnowledgeBaseError("nested schemas are not supported")
        free = frozenset().union(*(free_variables(f) for f in self.template.formulas()))
        if free != {self.var}:
            raise KnowledgeBaseError(
                f"schema over {self.var} must have exactly that free variable, found "
                f"{{{', '.join(sorted(free))}}}"
            )

    @property
    def strict(self):
        return getattr(self.template, "strict", False)

    def formulas(self):
        return self.template.formulas()

    def expand(self, constants) -> list[Simple]:
        return [self.template.instantiate(self.var, c) for c in constants]

    def render(self):
        return f"{self.template.render()} for all {self.var}"


ProbabilityAssertion = Union[Point, Interval, ConditionalBound, Schema]


def describe(a: ProbabilityAssertion) -> str:
    return str(a.origin) if a.origin is not None and a.origin.text else a.render()


@dataclass(frozen=True)
class KnowledgeBase:
    signature: Signature
    assertions: tuple = ()
    epsilon: Fraction | None = None
    positive_condition_floor: Fraction | None = None
    path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "assertions", tuple(self.assertions))
        if self.epsilon is not None:
            eps = to_fraction(self.epsilon)
            if not 0 < eps < 1:
                raise KnowledgeBaseError(f"epsilon {fmt(eps)} must lie strictly between 0 and 1")
            object.__setattr__(self, "epsilon", eps)
        if self.positive_condition_floor is not None:
            object.__setattr__(
                self, "positive_condition_floor", _unit(self.positive_condition_floor, "condition floor")
            )
        for a in self.assertions:
            for f in a.formulas():
                try:
                    check_formula(f, self.signature)
                except Exception as exc:
                    raise KnowledgeBaseError(f"{describe(a)}: {exc}") from exc
                if not isinstance(a, Schema) and free_variables(f):
                    raise KnowledgeBaseError(
                        f"{describe(a)}: free variable(s) {', '.join(sorted(free_variables(f)))}; "
                        f"add 'for all <var>' to make it a schema"
                    )

    @property
    def domain(self) -> tuple[str, ...]:
        return self.signature.constants

    def expanded(self) -> Iterator[tuple[ProbabilityAssertion, Simple]]:
        """Pairs (source assertion, ground instance) with schemas instantiated."""
        for a in self.assertions:
            if isinstance(a, Schema):
                for inst in a.expand(self.domain):
                    yield a, inst
            else:
                yield a, a

    def instances(self) -> list[Simple]:
        return [inst for _, inst in self.expanded()]

    def with_assertions(self, assertions) -> "KnowledgeBase":
        return KnowledgeBase(self.signature, tuple(assertions), self.epsilon,
                             self.positive_condition_floor, self.path)

    def adding(self, *assertions) -> "KnowledgeBase":
        return self.with_assertions(self.assertions + assertions)

    @property
    def uses_strict(self) -> bool:
        return any(getattr(a, "strict", False) for a in self.assertions)


__all__ = [
    "EQ", "GE", "LE", "Origin", "Point", "Interval", "ConditionalBound", "Schema",
    "ProbabilityAssertion", "KnowledgeBase", "describe",
]
