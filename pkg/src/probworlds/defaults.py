"""Default rules read as conditional probabilities within epsilon of one.

Builds the bird/penguin knowledge base, computes the exact largest belief
a single penguin instance (or the existence of a penguin) can receive,
and replays the textbook inequality chain that bounds it by roughly one
half at the LP witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .entailment import ConsistencyResult, is_consistent, query_max
from .errors import KnowledgeBaseError, WorldSpaceTooLargeError
from .kb import ConditionalBound, Interval, KnowledgeBase, Origin, Point, Schema
from .lp import GE
from .measure import Distribution, conditional, probability
from .quantifiers import expand
from .rationals import fmt, to_fraction
from .syntax import (
    And,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Signature,
    Var,
    atom,
    free_variables,
    to_text,
)
from .worlds import DEFAULT_MAX_ATOMS

PENGUIN_PREDICATES = (("Bird", 1), ("Fly", 1), ("Penguin", 1))


@dataclass(frozen=True)
class DefaultRule:
    """``for all x: p[conclusion(x) | condition(x)] >= 1 - eps``; ``negated`` flips the conclusion."""

    conclusion: Formula
    condition: Formula
    negated: bool = False
    var: str = "x"

    def __post_init__(self):
        free = free_variables(self.conclusion) | free_variables(self.condition)
        if free != {self.var}:
            raise KnowledgeBaseError(f"default rule must share exactly the variable {self.var}")

    def schema(self, epsilon) -> Schema:
        eps = to_fraction(epsilon)
        target = Not(self.conclusion) if self.negated else self.conclusion
        template = ConditionalBound(target, self.condition, GE, 1 - eps)
        return Schema(self.var, template, Origin(text=f"{template.render()} for all {self.var}"))


def _x(pred):
    return atom(pred, Var("x"))


BIRDS_FLY = DefaultRule(_x("Fly"), _x("Bird"))
PENGUINS_DONT = DefaultRule(_x("Fly"), _x("Penguin"), negated=True)
PENGUINS_ARE_BIRDS = ForAll("x", Implies(_x("Penguin"), _x("Bird")))


def _check_epsilon(epsilon) -> Fraction:
    eps = to_fraction(epsilon)
    if not 0 < eps < 1:
        raise KnowledgeBaseError(f"epsilon must satisfy 0 < epsilon < 1, got {fmt(eps)}")
    return eps


def term_names(n_terms: int) -> tuple[str, ...]:
    if n_terms < 1:
        raise KnowledgeBaseError("need at least one term")
    return tuple(f"t{i}" for i in range(1, n_terms + 1))


def penguin_kb(epsilon, n_terms: int, max_atoms: int = DEFAULT_MAX_ATOMS) -> KnowledgeBase:
    eps = _check_epsilon(epsilon)
    consts = term_names(n_terms)
    if 3 * n_terms > max_atoms:
        raise WorldSpaceTooLargeError(3 * n_terms, max_atoms)
    sig = Signature(PENGUIN_PREDICATES, consts)
    certain = Point(PENGUINS_ARE_BIRDS, Fraction(1), Origin(text=f"P({to_text(PENGUINS_ARE_BIRDS)}) = 1"))
    return KnowledgeBase(sig, (BIRDS_FLY.schema(eps), PENGUINS_DONT.schema(eps), certain), epsilon=eps)


def instance_closed_form(epsilon) -> Fraction:
    """``min(1, eps / (1 - eps))``: the exact largest ``p[Penguin(t)]``."""
    eps = _check_epsilon(epsilon)
    return min(Fraction(1), eps / (1 - eps))


def chain_bound(epsilon) -> Fraction:
    """``1 / (2 - 2 eps)``, the bound implied by the inequality chain."""
    eps = _check_epsilon(epsilon)
    return 1 / (2 - 2 * eps)


def union_ceiling(epsilon, n_terms: int) -> Fraction:
    """``n * eps / (1 - eps)`` from finite additivity over the instances."""
    eps = _check_epsilon(epsilon)
    return n_terms * eps / (1 - eps)


@dataclass(frozen=True)
class Maximum:
    value: Fraction
    witness: Distribution


def max_penguin_instance(epsilon, n_terms: int, term: str = "t1",
                         max_atoms: int = DEFAULT_MAX_ATOMS) -> Maximum:
    kb = penguin_kb(epsilon, n_terms, max_atoms)
    if term not in kb.domain:
        raise KnowledgeBaseError(f"unknown term {term!r}")
    return Maximum(*query_max(kb, atom("Penguin", term), max_atoms))


@dataclass(frozen=True)
class ExistentialBound:
    value: Fraction
    witness: Distribution
    union_ceiling: Fraction

    @property
    def capped_ceiling(self) -> Fraction:
        return min(Fraction(1), self.union_ceiling)


def existential_penguin_bound(epsilon, n_terms: int, max_atoms: int = DEFAULT_MAX_ATOMS) -> ExistentialBound:
    kb = penguin_kb(epsilon, n_terms, max_atoms)
    value, witness = query_max(kb, Exists("x", _x("Penguin")), max_atoms)
    return ExistentialBound(value, witness, union_ceiling(epsilon, n_terms))


@dataclass(frozen=True)
class ChainStep:
    relation: str  # relation of this line's value to the previous line's: "<=", "="
    text: str
    value: Fraction
    holds: bool


@dataclass(frozen=True)
class ChainReport:
    epsilon: Fraction
    steps: tuple[ChainStep, ...]
    p_penguin: Fraction
    fly_given_penguin: Fraction
    implied_bound: Fraction
    witness: Distribution
    side_conditions: tuple[tuple[str, bool], ...] = field(default=())

    @property
    def verified(self) -> bool:
        return (
            all(s.holds for s in self.steps)
            and all(ok for _, ok in self.side_conditions)
            and self.p_penguin <= self.implied_bound
        )

    def lines(self) -> list[str]:
        out = [f"inequality chain at the witness maximising p[Penguin(t1)], epsilon = {fmt(self.epsilon)}"]
        for i, s in enumerate(self.steps):
            lead = "   " if i == 0 else f"{s.relation:>3}"
            mark = "ok" if s.holds else "VIOLATED"
            out.append(f"{lead} {s.text:<56} = {fmt(s.value):>12}  [{mark}]")
        for text, ok in self.side_conditions:
            out.append(f"    side condition {text}: {'ok' if ok else 'VIOLATED'}")
        out.append(
            f"implied: (1 - eps) p <= (1 - p) + eps p, so p[Penguin(t1)] <= 1/(2 - 2 eps) = {fmt(self.implied_bound)}"
        )
        out.append(
            f"witness p[Penguin(t1)] = {fmt(self.p_penguin)} "
            f"{'<=' if self.p_penguin <= self.implied_bound else '>'} {fmt(self.implied_bound)}"
        )
        return out


_REL = {"<=": lambda a, b: a <= b, "=": lambda a, b: a == b}


def penguin_chain(epsilon) -> ChainReport:
    """Evaluate every line of the penguin inequality chain at the maximising witness."""
    eps = _check_epsilon(epsilon)
    best = max_penguin_instance(eps, 1)
    d = best.witness
    bird, fly, peng = atom("Bird", "t1"), atom("Fly", "t1"), atom("Penguin", "t1")

    def p(f):
        return probability(d, f)

    pb, pp = p(bird), p(peng)
    if pp == 0:
        raise KnowledgeBaseError("the chain divides by p[Penguin(t1)], which is 0 at the witness")
    fb_np = p(And(And(fly, bird), Not(peng)))
    fb_p = p(And(And(fly, bird), peng))
    f_p = p(And(fly, peng))
    not_p = p(Not(peng))
    fly_given_peng = f_p / pp

    rows = [
        (None, "1 - eps (threshold read for ~= 1)", 1 - eps),
        ("<=", "p[Fly|Bird]", conditional(d, fly, bird)),
        ("=", "p[Fly&Bird&~Peng]/p[Bird] + p[Fly&Bird&Peng]/p[Bird]", fb_np / pb + fb_p / pb),
        ("<=", "p[Fly&Bird&~Peng]/p[Peng] + p[Fly&Bird&Peng]/p[Peng]", fb_np / pp + fb_p / pp),
        ("<=", "p[~Peng]/p[Peng] + p[Fly&Peng]/p[Peng]", not_p / pp + f_p / pp),
        ("=", "p[~Peng]/p[Peng] + p[Fly|Peng]", not_p / pp + fly_given_peng),
        ("<=", "p[~Peng]/p[Peng] + eps (reading ~= 0 as <= eps)", not_p / pp + eps),
    ]
    steps = []
    prev = None
    for rel, text, value in rows:
        holds = True if rel is None else _REL[rel](prev, value)
        steps.append(ChainStep(rel or "", text, value, holds))
        prev = value
    sides = (
        ("p[Bird] >= p[Peng]", pb >= pp),
        ("p[Fly|Peng] <= eps", fly_given_peng <= eps),
    )
    return ChainReport(eps, tuple(steps), pp, fly_given_peng, chain_bound(eps), d, sides)


figure1_chain = penguin_chain


def exception_inconsistency(epsilon, bird_lo, fly_hi, ostrich: bool = False) -> ConsistencyResult:
    """Is ``p[Fly(c)|Bird(c)] >= 1 - eps`` compatible with a likely bird that likely cannot fly?

    With ``ostrich`` the individual is additionally a certain ostrich, every
    ostrich is a bird and ostriches by default do not fly; the extra
    knowledge leaves the verdict unchanged.
    """
    eps = _check_epsilon(epsilon)
    preds = [("Bird", 1), ("Fly", 1)] + ([("Ostrich", 1)] if ostrich else [])
    sig = Signature(tuple(preds), ("c",))
    bird, fly = atom("Bird", "c"), atom("Fly", "c")
    assertions = [
        ConditionalBound(fly, bird, GE, 1 - eps),
        Interval(bird, to_fraction(bird_lo), Fraction(1)),
        Interval(fly, Fraction(0), to_fraction(fly_hi)),
    ]
    if ostrich:
        ost = atom("Ostrich", "c")
        assertions += [
            Point(ost, Fraction(1)),
            Point(ForAll("x", Implies(_x("Ostrich"), _x("Bird"))), Fraction(1)),
            ConditionalBound(Not(fly), ost, GE, 1 - eps),
        ]
    return is_consistent(KnowledgeBase(sig, tuple(assertions), epsilon=eps))


@dataclass(frozen=True)
class AnomalyReport:
    epsilon: Fraction
    n_terms: int
    per_term_max: Fraction
    chain_bound: Fraction
    existential_max: Fraction
    union_ceiling: Fraction
    per_term_witness: Distribution = field(repr=False)
    existential_witness: Distribution = field(repr=False)

    @property
    def capped_ceiling(self) -> Fraction:
        return min(Fraction(1), self.union_ceiling)


def anomaly(epsilon, n_terms: int, max_atoms: int = DEFAULT_MAX_ATOMS) -> AnomalyReport:
    eps = _check_epsilon(epsilon)
    inst = max_penguin_instance(eps, n_terms, max_atoms=max_atoms)
    ex = existential_penguin_bound(eps, n_terms, max_atoms)
    return AnomalyReport(eps, n_terms, inst.value, chain_bound(eps), ex.value, ex.union_ceiling,
                         inst.witness, ex.witness)


ANOMALY_COLUMNS = ("epsilon", "n", "per_term_max", "chain_bound", "existential_max", "union_ceiling")


def anomaly_rows(reports) -> list[tuple[str, ...]]:
    return [
        (fmt(r.epsilon), str(r.n_terms), fmt(r.per_term_max), fmt(r.chain_bound),
         fmt(r.existential_max), fmt(r.union_ceiling))
        for r in reports
    ]


def check_witness_penguin(d: Distribution, epsilon, n_terms: int) -> bool:
    """Recheck a penguin-KB witness by substitution, instance by instance."""
    eps = to_fraction(epsilon)
    dom = term_names(n_terms)
    if probability(d, expand(PENGUINS_ARE_BIRDS, dom)) != 1:
        return False
    for t in dom:
        b, f, pg = atom("Bird", t), atom("Fly", t), atom("Penguin", t)
        if probability(d, And(f, b)) < (1 - eps) * probability(d, b):
            return False
        if probability(d, And(Not(f), pg)) < (1 - eps) * probability(d, pg):
            return False
    return True


__all__ = [
    "DefaultRule", "penguin_kb", "max_penguin_instance", "existential_penguin_bound",
    "penguin_chain", "figure1_chain", "exception_inconsistency", "anomaly", "AnomalyReport", "ChainReport",
    "instance_closed_form", "chain_bound", "union_ceiling", "anomaly_rows", "ANOMALY_COLUMNS",
]
