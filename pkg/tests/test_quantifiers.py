import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gen import random_distribution, random_open
from probworlds.errors import EmptyDomainError, ProbWorldsError
from probworlds.kb import KnowledgeBase, Point
from probworlds.measure import Distribution, probability
from probworlds.quantifiers import (
    HerbrandDomain,
    certain_universal_facts,
    check_quantifier_monotonicity,
    expand,
)
from probworlds.syntax import And, Exists, ForAll, Implies, Not, Or, Signature, Var, atom, substitute, to_text
from probworlds.worlds import WorldSpace, truth_vector

x, y = Var("x"), Var("y")
BIRDS = Signature((("Bird", 1), ("Penguin", 1)), ("t1", "t2"))


class TestExpand:
    def test_existential(self):
        assert expand(Exists("x", atom("Penguin", x)), ["t1", "t2"]) == Or(atom("Penguin", "t1"), atom("Penguin", "t2"))

    def test_singleton_universal(self):
        f = ForAll("x", Implies(atom("Penguin", x), atom("Bird", x)))
        assert expand(f, HerbrandDomain(("t1",))) == Implies(atom("Penguin", "t1"), atom("Bird", "t1"))

    def test_nested(self):
        f = ForAll("x", Exists("y", atom("R", x, y)))
        g = expand(f, ["a", "b"])
        assert to_text(g) == "(R(a, a) | R(a, b)) & (R(b, a) | R(b, b))"

    def test_three_constants_left_nested(self):
        g = expand(Exists("x", atom("P", x)), ["a", "b", "c"])
        assert g == Or(Or(atom("P", "a"), atom("P", "b")), atom("P", "c"))

    def test_quantifier_free_untouched(self):
        f = And(atom("P", "a"), Not(atom("P", "b")))
        assert expand(f, ["a", "b"]) == f

    def test_empty_domain(self):
        with pytest.raises(EmptyDomainError):
            HerbrandDomain(())
        with pytest.raises(EmptyDomainError):
            expand(Exists("x", atom("P", x)), [])


class TestMonotonicity:
    @pytest.fixture
    def uniform(self):
        return Distribution.uniform(WorldSpace(Signature((("P", 1),), ("t1", "t2"))))

    def test_existential(self, uniform):
        r = check_quantifier_monotonicity(uniform, Exists("x", atom("P", x)))
        assert r.passed and r.probability == Fraction(3, 4)
        assert [p for _, p in r.instances] == [Fraction(1, 2)] * 2
        assert r.lines()[0] == "PASS p[exists x. P(x)] = 3/4 >= max instance 1/2"

    def test_universal(self, uniform):
        r = check_quantifier_monotonicity(uniform, ForAll("x", atom("P", x)))
        assert r.passed and r.probability == Fraction(1, 4)
        assert r.dual == Exists("x", Not(atom("P", x))) and r.dual_probability == Fraction(3, 4)

    def test_certain_universal_instances(self):
        ws = WorldSpace(Signature((("P", 1),), ("t1", "t2")))
        d = Distribution.point_mass(ws, 3)
        r = check_quantifier_monotonicity(d, ForAll("x", atom("P", x)))
        assert r.probability == 1 and all(p == 1 for _, p in r.instances)

    def test_needs_quantifier(self, uniform):
        with pytest.raises(ProbWorldsError):
            check_quantifier_monotonicity(uniform, atom("P", "t1"))


class TestCertainUniversalFacts:
    def test_penguin_facts(self):
        kb = KnowledgeBase(Signature(BIRDS.predicates, ("t1",)),
                           (Point(ForAll("x", Implies(atom("Penguin", x), atom("Bird", x))), 1),))
        facts = [str(f) for f in certain_universal_facts(kb)]
        assert "p[Bird(t1)] >= p[Penguin(t1)]" in facts
        assert "p[Bird(t1) & Penguin(t1)] = p[Penguin(t1)]" in facts
        assert "p[Penguin(t1) -> Bird(t1)] = 1" in facts

    def test_no_universals(self):
        kb = KnowledgeBase(BIRDS, (Point(atom("Bird", "t1"), Fraction(1, 2)),))
        assert certain_universal_facts(kb) == []

    def test_facts_hold_at_certain_distributions(self):
        rng = random.Random(3)
        f = ForAll("x", Implies(atom("Penguin", x), atom("Bird", x)))
        ws = WorldSpace(BIRDS)
        kb = KnowledgeBase(BIRDS, (Point(f, 1),))
        good = truth_vector(expand(f, BIRDS.constants), ws)
        for _ in range(20):
            weights = [Fraction(rng.randint(0, 5)) if good[k] else Fraction(0) for k in range(ws.size)]
            weights[next(good.indices())] += 1
            d = Distribution.from_weights(ws, [w / sum(weights) for w in weights])
            assert all(fact.check(d) for fact in certain_universal_facts(kb))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_expansion_homomorphism(seed, size):
    rng = random.Random(seed)
    sig = Signature((("P", 1), ("Q", 1)), ("a", "b", "c")[:size])
    ws = WorldSpace(sig)
    phi = random_open(rng, sig, "x", 2)
    inst = [truth_vector(substitute(phi, "x", c), ws) for c in sig.constants]
    ex = truth_vector(expand(Exists("x", phi), sig.constants), ws)
    al = truth_vector(expand(ForAll("x", phi), sig.constants), ws)
    acc_or, acc_and = ws.constant(False), ws.constant(True)
    for v in inst:
        acc_or, acc_and = acc_or | v, acc_and & v
    assert ex == acc_or and al == acc_and


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_laws_hold(seed, size):
    rng = random.Random(seed)
    sig = Signature((("P", 1), ("Q", 1)), ("a", "b", "c")[:size])
    ws = WorldSpace(sig)
    d = random_distribution(rng, ws)
    phi = random_open(rng, sig, "x", 2)
    for q in (Exists, ForAll):
        r = check_quantifier_monotonicity(d, q("x", phi))
        assert r.passed
    p_all = probability(d, expand(ForAll("x", phi), sig.constants))
    assert p_all == 1 - probability(d, expand(Exists("x", Not(phi)), sig.constants))

