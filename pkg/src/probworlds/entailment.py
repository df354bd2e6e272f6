"""Probabilistic entailment as exact linear programming over world weights.

Every probability assertion becomes a linear constraint on the vector of
world probabilities: its coefficients are the truth vector of the
sentence.  Tight bounds on a query are the minimum and maximum of the
query's truth vector against that polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InconsistentKnowledgeBaseError, KnowledgeBaseError
from .kb import (
    ConditionalBound,
    Interval,
    KnowledgeBase,
    Point,
    ProbabilityAssertion,
    describe,
)
from .lp import EQ, GE, LE, Infeasible, LinearConstraint, LPProblem, Optimal, solve_aggregated
from .measure import Distribution, probability
from .quantifiers import expand
from .rationals import fmt
from .syntax import And, Formula, check_formula, require_sentence, to_text
from .worlds import DEFAULT_MAX_ATOMS, TruthVector, WorldSpace, truth_vector

NORMALIZATION = "normalization"


@dataclass(frozen=True)
class CompiledKB:
    kb: KnowledgeBase
    space: WorldSpace
    problem: LPProblem

    def ground(self, f: Formula) -> Formula:
        return expand(f, self.kb.domain)

    def vector(self, f: Formula) -> TruthVector:
        return truth_vector(self.ground(f), self.space)


def _indicator(tv: TruthVector, scale=Fraction(1)) -> dict[int, Fraction]:
    return {k: scale for k in tv.indices()}


def _instance_constraints(inst, label, space, dom, floor):
    def vec(f):
        return truth_vector(expand(f, dom), space)

    if isinstance(inst, Point):
        return [LinearConstraint(_indicator(vec(inst.sentence)), EQ, inst.value, label)]
    if isinstance(inst, Interval):
        row = _indicator(vec(inst.sentence))
        if inst.lo == inst.hi:
            return [LinearConstraint(row, EQ, inst.lo, label)]
        out = []
        if inst.lo > 0:
            out.append(LinearConstraint(row, GE, inst.lo, label))
        if inst.hi < 1:
            out.append(LinearConstraint(row, LE, inst.hi, label))
        return out
    if isinstance(inst, ConditionalBound):
        cond = vec(inst.condition)
        both = vec(inst.target) & cond
        c = inst.threshold
        # p[a & b] - c * p[b]  <rel>  0
        row = {k: -c for k in cond.indices()}
        for k in both.indices():
            row[k] = 1 - c
        out = [LinearConstraint(row, inst.relation, Fraction(0), label)]
        if floor is not None and floor > 0:
            out.append(LinearConstraint(_indicator(cond), GE, floor, label))
        return out
    raise KnowledgeBaseError(f"cannot compile assertion {inst!r}")


def compile_kb(kb: KnowledgeBase, max_atoms: int = DEFAULT_MAX_ATOMS) -> CompiledKB:
    """Build the world space of ``kb`` and its constraint system.

    Constraint labels are the index of the originating assertion in
    ``kb.assertions`` (schemas contribute one constraint per constant), or
    ``NORMALIZATION`` for the sum-to-one row.
    """
    space = WorldSpace(kb.signature, max_atoms)
    constraints = [LinearConstraint({k: Fraction(1) for k in range(space.size)}, EQ, Fraction(1), NORMALIZATION)]
    index = {id(a): i for i, a in enumerate(kb.assertions)}
    for src, inst in kb.expanded():
        constraints.extend(
            _instance_constraints(inst, index[id(src)], space, kb.domain, kb.positive_condition_floor)
        )
    return CompiledKB(kb, space, LPProblem(space.size, tuple(constraints), {}, True))


compile = compile_kb


def violated_assertions(kb: KnowledgeBase, d: Distribution) -> list[ProbabilityAssertion]:
    """Assertions of ``kb`` that ``d`` fails, evaluated by direct summation.

    Deliberately independent of the constraint rows so that it can audit
    LP witnesses.
    """
    dom = kb.domain
    bad = []
    for src, inst in kb.expanded():
        if isinstance(inst, Point):
            ok = probability(d, expand(inst.sentence, dom)) == inst.value
        elif isinstance(inst, Interval):
            ok = inst.lo <= probability(d, expand(inst.sentence, dom)) <= inst.hi
        else:
            a, b = expand(inst.target, dom), expand(inst.condition, dom)
            joint, pb = probability(d, And(a, b)), probability(d, b)
            rhs = inst.threshold * pb
            ok = {GE: joint >= rhs, LE: joint <= rhs, EQ: joint == rhs}[inst.relation]
            if kb.positive_condition_floor:
                ok = ok and pb >= kb.positive_condition_floor
        if not ok and src not in bad:
            bad.append(src)
    return bad


def _check_witness(kb, d):
    bad = violated_assertions(kb, d)
    if bad:
        raise AssertionError("LP witness violates " + "; ".join(describe(a) for a in bad))
    return d


def _feasible(problem, keep):
    p = problem.with_constraints(c for c in problem.constraints if c.label == NORMALIZATION or c.label in keep)
    return not isinstance(solve_aggregated(p.with_objective({}, True)), Infeasible)


def minimal_conflict(kb: KnowledgeBase, compiled: CompiledKB | None = None) -> list[ProbabilityAssertion]:
    """An irreducible set of assertions that cannot hold together.

    Deletion filter: drop each assertion in turn and keep it dropped if the
    rest stays infeasible.  Returns ``[]`` for a consistent ``kb``.
    """
    compiled = compiled or compile_kb(kb)
    keep = set(range(len(kb.assertions)))
    if _feasible(compiled.problem, keep):
        return []
    for i in range(len(kb.assertions)):
        trial = keep - {i}
        if not _feasible(compiled.problem, trial):
            keep = trial
    return [kb.assertions[i] for i in sorted(keep)]


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    witness: Distribution | None
    note: str
    clashing: tuple = ()

    def __bool__(self):
        return self.consistent


def _refutation(kb, compiled):
    clash = minimal_conflict(kb, compiled)
    parts = "; ".join(describe(a) for a in clash)
    note = f"no probability distribution over the {compiled.space.size} worlds satisfies together: {parts}"
    return note, tuple(clash)


def is_consistent(kb: KnowledgeBase, max_atoms: int = DEFAULT_MAX_ATOMS) -> ConsistencyResult:
    compiled = compile_kb(kb, max_atoms)
    out = solve_aggregated(compiled.problem.with_objective({}, True))
    if isinstance(out, Infeasible):
        note, clash = _refutation(kb, compiled)
        return ConsistencyResult(False, None, note, clash)
    d = _check_witness(kb, Distribution.from_weights(compiled.space, out.witness))
    return ConsistencyResult(True, d, "a witness distribution satisfies every assertion")


@dataclass(frozen=True)
class Bounds:
    query: Formula
    ground_query: Formula
    lo: Fraction
    hi: Fraction
    lo_witness: Distribution
    hi_witness: Distribution
    n_constraints: int

    def __str__(self):
        return f"[{fmt(self.lo)}, {fmt(self.hi)}]"

    def __iter__(self):
        return iter((self.lo, self.hi))


def query_bounds(kb: KnowledgeBase, q: Formula, max_atoms: int = DEFAULT_MAX_ATOMS,
                 compiled: CompiledKB | None = None) -> Bounds:
    """Tightest ``[lo, hi]`` for ``p[q]`` over all distributions satisfying ``kb``."""
    require_sentence(q)
    check_formula(q, kb.signature)
    compiled = compiled or compile_kb(kb, max_atoms)
    ground = compiled.ground(q)
    objective = _indicator(truth_vector(ground, compiled.space))
    results = []
    for maximize in (False, True):
        out = solve_aggregated(compiled.problem.with_objective(objective, maximize))
        if isinstance(out, Infeasible):
            note, clash = _refutation(kb, compiled)
            raise InconsistentKnowledgeBaseError(note, clash)
        assert isinstance(out, Optimal)
        d = _check_witness(kb, Distribution.from_weights(compiled.space, out.witness))
        if probability(d, ground) != out.value:
            raise AssertionError("witness does not attain the reported bound")
        results.append((out.value, d))
    (lo, dlo), (hi, dhi) = results
    return Bounds(q, ground, lo, hi, dlo, dhi, len(compiled.problem.constraints))


def query_max(kb: KnowledgeBase, q: Formula, max_atoms: int = DEFAULT_MAX_ATOMS) -> tuple[Fraction, Distribution]:
    """Only the upper bound and its witness (one LP instead of two)."""
    require_sentence(q)
    compiled = compile_kb(kb, max_atoms)
    ground = compiled.ground(q)
    out = solve_aggregated(compiled.problem.with_objective(_indicator(truth_vector(ground, compiled.space)), True))
    if isinstance(out, Infeasible):
        note, clash = _refutation(kb, compiled)
        raise InconsistentKnowledgeBaseError(note, clash)
    d = _check_witness(kb, Distribution.from_weights(compiled.space, out.witness))
    return out.value, d


def explain_query(q: Formula, kb: KnowledgeBase) -> str:
    return to_text(expand(q, kb.domain))
