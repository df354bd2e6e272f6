import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gen import SIGNATURES, random_assertion, random_kb, random_sentence
from oracle import oracle_bounds
from probworlds.entailment import (
    NORMALIZATION,
    compile_kb,
    is_consistent,
    minimal_conflict,
    query_bounds,
    violated_assertions,
)
from probworlds.errors import InconsistentKnowledgeBaseError, KnowledgeBaseError, WorldSpaceTooLargeError
from probworlds.kb import ConditionalBound, Interval, KnowledgeBase, Point, Schema
from probworlds.lp import EQ, GE
from probworlds.measure import probability
from probworlds.quantifiers import expand
from probworlds.syntax import And, Atom, ForAll, Implies, Not, Signature, Var, atom
from probworlds.worlds import WorldSpace, disjunctive_form, truth_vector

F = Fraction
A, B = Atom("A"), Atom("B")
x = Var("x")


def kb_of(*assertions, sig=None, **kw):
    return KnowledgeBase(sig or Signature.propositional("A", "B"), tuple(assertions), **kw)


class TestCompile:
    def test_point(self):
        c = compile_kb(kb_of(Point(A, F(1, 2)), sig=Signature.propositional("A")))
        norm, row = c.problem.constraints
        assert norm.label == NORMALIZATION and norm.coeffs == {0: 1, 1: 1} and norm.bound == 1
        assert row.coeffs == {1: 1} and row.relation == EQ and row.bound == F(1, 2)

    def test_conditional_row(self):
        sig = Signature((("Bird", 1), ("Fly", 1)), ("t",))
        c = compile_kb(kb_of(ConditionalBound(atom("Fly", "t"), atom("Bird", "t"), GE, F(9, 10)), sig=sig))
        row = c.problem.constraints[1]
        # Bird(t) is bit 0, Fly(t) bit 1: worlds 1 (bird only) and 3 (flying bird)
        assert row.coeffs == {1: F(-9, 10), 3: F(1, 10)}
        assert row.relation == GE and row.bound == 0

    def test_certain_universal_zeroes_violators(self):
        sig = Signature((("Bird", 1), ("Penguin", 1)), ("t1", "t2"))
        f = ForAll("x", Implies(atom("Penguin", x), atom("Bird", x)))
        c = compile_kb(kb_of(Point(f, 1), sig=sig))
        row = c.problem.constraints[1]
        good = set(row.coeffs)
        for w in c.space:
            violates = any(w.value(atom("Penguin", t)) and not w.value(atom("Bird", t)) for t in ("t1", "t2"))
            assert (w.index not in good) == violates
        assert len(good) == 9

    def test_schema_one_row_per_constant(self):
        sig = Signature((("P", 1),), ("a", "b", "c"))
        kb = kb_of(Schema("x", Interval(atom("P", x), F(1, 4), F(3, 4))), sig=sig)
        assert len(compile_kb(kb).problem.constraints) == 1 + 3 * 2

    def test_floor_adds_rows(self):
        sig = Signature((("Bird", 1), ("Fly", 1)), ("t",))
        kb = kb_of(ConditionalBound(atom("Fly", "t"), atom("Bird", "t"), GE, F(9, 10)), sig=sig,
                   positive_condition_floor=F(1, 100))
        assert len(compile_kb(kb).problem.constraints) == 3

    def test_cap(self):
        sig = Signature((("P", 1),), tuple(f"c{i}" for i in range(5)))
        with pytest.raises(WorldSpaceTooLargeError):
            compile_kb(kb_of(sig=sig), max_atoms=4)


class TestConsistency:
    def test_contradictory_points(self):
        kb = kb_of(Point(A, F(3, 10)), Point(A, F(6, 10)))
        r = is_consistent(kb)
        assert not r.consistent and len(r.clashing) == 2

    def test_single_point(self):
        r = is_consistent(kb_of(Point(A, F(1, 2))))
        assert r.consistent and probability(r.witness, A) == F(1, 2)

    def test_exception_kb(self):
        sig = Signature((("Bird", 1), ("Fly", 1)), ("c",))
        fly, bird = atom("Fly", "c"), atom("Bird", "c")
        kb = kb_of(ConditionalBound(fly, bird, GE, F(9, 10)), Interval(bird, F(9, 10), 1),
                   Interval(fly, 0, F(1, 10)), sig=sig)
        assert not is_consistent(kb)
        assert minimal_conflict(kb) == list(kb.assertions)

    def test_minimal_conflict_drops_bystanders(self):
        kb = kb_of(Point(B, F(1, 3)), Point(A, F(3, 10)), Point(A, F(6, 10)))
        assert minimal_conflict(kb) == list(kb.assertions[1:])

    def test_floor_can_break_consistency(self):
        sig = Signature((("Bird", 1), ("Fly", 1)), ("c",))
        fly, bird = atom("Fly", "c"), atom("Bird", "c")
        base = (ConditionalBound(fly, bird, GE, F(9, 10)), Interval(fly, 0, 0))
        assert is_consistent(kb_of(*base, sig=sig))
        assert not is_consistent(kb_of(*base, sig=sig, positive_condition_floor=F(1, 100)))


class TestBounds:
    def test_implication(self):
        b = query_bounds(kb_of(Point(A, F(1, 2)), Point(Implies(A, B), F(3, 4))), B)
        assert (b.lo, b.hi) == (F(1, 4), F(3, 4)) and str(b) == "[1/4, 3/4]"
        assert probability(b.lo_witness, B) == F(1, 4)
        assert probability(b.hi_witness, B) == F(3, 4)

    def test_certain_atom(self):
        b = query_bounds(kb_of(Point(A, 1)), And(A, A))
        assert (b.lo, b.hi) == (1, 1)

    def test_empty(self):
        assert tuple(query_bounds(kb_of(), A))[:2] == (0, 1)

    def test_inconsistent_raises(self):
        with pytest.raises(InconsistentKnowledgeBaseError) as err:
            query_bounds(kb_of(Point(A, F(3, 10)), Point(A, F(6, 10))), B)
        assert len(err.value.clashing) == 2

    def test_open_query_rejected(self):
        sig = Signature((("P", 1),), ("a",))
        with pytest.raises(Exception):
            query_bounds(kb_of(sig=sig), atom("P", x))

    def test_quantified_query(self):
        sig = Signature((("P", 1),), ("a", "b"))
        kb = kb_of(Schema("x", Point(atom("P", x), F(1, 2))), sig=sig)
        b = query_bounds(kb, ForAll("x", atom("P", x)))
        assert (b.lo, b.hi) == (0, F(1, 2))


SEEDS = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(SEEDS)
def test_witnesses_sound(seed):
    rng = random.Random(seed)
    kb = random_kb(rng)
    q = random_sentence(rng, kb.signature)
    try:
        b = query_bounds(kb, q)
    except InconsistentKnowledgeBaseError:
        assert not is_consistent(kb)
        return
    ground = expand(q, kb.domain)
    assert b.lo <= b.hi
    assert not violated_assertions(kb, b.lo_witness) and not violated_assertions(kb, b.hi_witness)
    assert probability(b.lo_witness, ground) == b.lo and probability(b.hi_witness, ground) == b.hi


@settings(max_examples=40, deadline=None)
@given(SEEDS)
def test_adding_assertions_never_widens(seed):
    rng = random.Random(seed)
    kb = random_kb(rng, 2)
    if not is_consistent(kb):
        return
    q = random_sentence(rng, kb.signature)
    wider = kb.adding(random_assertion(rng, kb.signature))
    if not is_consistent(wider):
        return
    b0, b1 = query_bounds(kb, q), query_bounds(wider, q)
    assert b0.lo <= b1.lo and b1.hi <= b0.hi


@settings(max_examples=40, deadline=None)
@given(SEEDS)
def test_equivalent_queries(seed):
    rng = random.Random(seed)
    kb = random_kb(rng, 2)
    if not is_consistent(kb):
        return
    q = expand(random_sentence(rng, kb.signature), kb.domain)
    c = compile_kb(kb)
    alt = disjunctive_form(q, c.space)
    assert truth_vector(alt, c.space) == truth_vector(q, c.space)
    b0, b1 = query_bounds(kb, q, compiled=c), query_bounds(kb, alt, compiled=c)
    assert (b0.lo, b0.hi) == (b1.lo, b1.hi)


@pytest.mark.parametrize("seed", range(20))
def test_agrees_with_oracle(seed):
    rng = random.Random(1000 + seed)
    kb = random_kb(rng)
    q = random_sentence(rng, kb.signature)
    expected = oracle_bounds(kb, q)
    try:
        b = query_bounds(kb, q)
        got = (b.lo, b.hi)
    except InconsistentKnowledgeBaseError:
        got = None
    assert got == expected


def test_schema_needs_its_variable():
    with pytest.raises(KnowledgeBaseError):
        Schema("x", Point(atom("P", "a"), F(1, 2)))


def test_unit_interval_enforced():
    with pytest.raises(KnowledgeBaseError):
        Point(A, F(3, 2))
    with pytest.raises(KnowledgeBaseError):
        Interval(A, F(3, 4), F(1, 4))
    with pytest.raises(KnowledgeBaseError):
        kb_of(Point(Not(Atom("C")), F(1, 2)))


def test_signatures_small_enough_for_oracle():
    assert all(WorldSpace(s).n_atoms <= 4 for s in SIGNATURES)
