"""Quantifier elimination over a finite constant domain.

Under domain closure an existential is the disjunction of its instances and
a universal their conjunction.  The probability laws that follow (an
existential is at least as probable as any instance, a universal at most as
probable, and the two are dual) are exposed as checkable reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EmptyDomainError, ProbWorldsError
from .kb import Interval, KnowledgeBase, Point
from .lp import EQ, GE
from .measure import Distribution, probability
from .rationals import fmt
from .syntax import (
    BINARY,
    And,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    conjoin,
    disjoin,
    require_sentence,
    substitute,
    to_text,
)


@dataclass(frozen=True)
class HerbrandDomain:
    constants: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        if not self.constants:
            raise EmptyDomainError("the Herbrand domain must contain at least one constant")

    def __iter__(self):
        return iter(self.constants)

    def __len__(self):
        return len(self.constants)


def _constants(dom) -> tuple[str, ...]:
    if isinstance(dom, HerbrandDomain):
        return dom.constants
    return tuple(dom)


def expand(f: Formula, dom: HerbrandDomain | Sequence[str]) -> Formula:
    """Quantifier-free equivalent of ``f`` over ``dom``; inner quantifiers first."""
    consts = _constants(dom)
    if isinstance(f, (ForAll, Exists)):
        if not consts:
            raise EmptyDomainError(f"cannot expand {to_text(f)!r} over an empty domain")
        body = expand(f.body, consts)
        instances = [substitute(body, f.var, c) for c in consts]
        return conjoin(instances) if isinstance(f, ForAll) else disjoin(instances)
    if isinstance(f, Not):
        return Not(expand(f.body, consts))
    if isinstance(f, BINARY):
        return type(f)(expand(f.left, consts), expand(f.right, consts))
    return f


def sentence_probability(d: Distribution, f: Formula) -> Fraction:
    """Probability of any sentence, quantifiers expanded over the space's constants."""
    return probability(d, expand(require_sentence(f), d.space.signature.constants))


@dataclass(frozen=True)
class MonotonicityReport:
    formula: Formula
    kind: str  # "exists" or "forall"
    probability: Fraction
    instances: tuple[tuple[str, Fraction], ...]
    dual: Formula  # exists x. ~phi for forall x. phi, and vice versa
    dual_probability: Fraction
    monotone: bool
    duality: bool

    @property
    def passed(self) -> bool:
        return self.monotone and self.duality

    def lines(self) -> list[str]:
        head = "PASS" if self.passed else "FAIL"
        ps = [p for _, p in self.instances]
        if self.kind == "exists":
            claim = f"p[{to_text(self.formula)}] = {fmt(self.probability)} >= max instance {fmt(max(ps))}"
        else:
            claim = f"p[{to_text(self.formula)}] = {fmt(self.probability)} <= min instance {fmt(min(ps))}"
        out = [f"{head} {claim}"]
        for c, p in self.instances:
            out.append(f"  instance {c}: {fmt(p)}")
        out.append(
            f"  duality: 1 - p[{to_text(self.dual)}] = {fmt(1 - self.dual_probability)}"
            f" {'==' if self.duality else '!='} {fmt(self.probability)}"
        )
        return out


def check_quantifier_monotonicity(d: Distribution, f: Formula, dom=None) -> MonotonicityReport:
    """Compare a top-level quantified sentence with each of its instances."""
    if not isinstance(f, (ForAll, Exists)):
        raise ProbWorldsError(f"{to_text(f)!r} does not start with a quantifier")
    require_sentence(f)
    consts = _constants(dom) if dom is not None else d.space.signature.constants
    HerbrandDomain(consts)
    p = probability(d, expand(f, consts))
    inst = tuple((c, probability(d, expand(substitute(f.body, f.var, c), consts))) for c in consts)
    ps = [q for _, q in inst]
    if isinstance(f, Exists):
        dual = ForAll(f.var, Not(f.body))
        monotone = all(p >= q for q in ps)
    else:
        dual = Exists(f.var, Not(f.body))
        monotone = all(p <= q for q in ps)
    pd = probability(d, expand(dual, consts))
    return MonotonicityReport(
        f, "exists" if isinstance(f, Exists) else "forall", p, inst, dual, pd, monotone, p == 1 - pd
    )


@dataclass(frozen=True)
class DerivedFact:
    """A comparison ``p[left] <relation> p[right]`` implied by a certain universal."""

    left: Formula
    relation: str
    right: Formula | None  # None compares against the number 1
    reason: str

    def check(self, d: Distribution) -> bool:
        consts = d.space.signature.constants
        lv = probability(d, expand(self.left, consts))
        rv = Fraction(1) if self.right is None else probability(d, expand(self.right, consts))
        return lv >= rv if self.relation == GE else lv == rv

    def __str__(self):
        rhs = "1" if self.right is None else f"p[{to_text(self.right)}]"
        return f"p[{to_text(self.left)}] {self.relation} {rhs}"


def _certain(a) -> bool:
    return (isinstance(a, Point) and a.value == 1) or (isinstance(a, Interval) and a.lo == 1)


def certain_universal_facts(kb: KnowledgeBase) -> list[DerivedFact]:
    """Instance-level consequences of every universal asserted with probability one.

    For ``P(forall x. phi(x) -> psi(x)) = 1`` and each constant ``t`` this
    yields ``p[psi(t)] >= p[phi(t)]`` and ``p[psi(t) & phi(t)] = p[phi(t)]``;
    for any certain universal each instance gets probability one.
    """
    facts = []
    for a in kb.instances():
        if not (_certain(a) and isinstance(a.sentence, ForAll)):
            continue
        u = a.sentence
        reason = f"P({to_text(u)}) = 1"
        for c in kb.domain:
            body = substitute(u.body, u.var, c)
            if isinstance(body, Implies):
                facts.append(DerivedFact(body.right, GE, body.left, reason))
                facts.append(DerivedFact(And(body.right, body.left), EQ, body.left, reason))
            facts.append(DerivedFact(body, EQ, None, reason))
    return facts
