"""Probability distributions over a world space and sentence probabilities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import DistributionError, SignatureMismatchError
from .rationals import fmt, to_fraction
from .syntax import Formula, Or, to_text
from .worlds import TruthVector, WorldSpace, truth_vector


class _Undefined:
    """Value of a conditional probability whose condition has probability 0."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "undefined"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


class Distribution:
    """Nonnegative rational weights on the worlds of a space, summing to exactly 1."""

    __slots__ = ("space", "_weights")

    def __init__(self, space: WorldSpace, weights: Mapping[int, Fraction]):
        clean = {}
        total = Fraction(0)
        for k, w in weights.items():
            if not 0 <= k < space.size:
                raise DistributionError(f"world index {k} outside 0..{space.size - 1}")
            w = to_fraction(w)
            if w < 0:
                raise DistributionError(f"negative weight {fmt(w)} on world {k}")
            total += w
            if w:
                clean[k] = w
        if total != 1:
            raise DistributionError(f"weights sum to {fmt(total)}, not 1")
        self.space = space
        self._weights = dict(sorted(clean.items()))

    @classmethod
    def from_weights(cls, space: WorldSpace, weights) -> "Distribution":
        """Dense list of weights, one per world in canonical order."""
        weights = list(weights)
        if len(weights) != space.size:
            raise DistributionError(f"expected {space.size} weights, got {len(weights)}")
        return cls(space, dict(enumerate(weights)))

    @classmethod
    def uniform(cls, space: WorldSpace) -> "Distribution":
        w = Fraction(1, space.size)
        return cls(space, {k: w for k in range(space.size)})

    @classmethod
    def point_mass(cls, space: WorldSpace, k: int) -> "Distribution":
        return cls(space, {k: Fraction(1)})

    def weight(self, k: int) -> Fraction:
        return self._weights.get(k, Fraction(0))

    @property
    def support(self) -> dict[int, Fraction]:
        """Nonzero weights keyed by world index."""
        return dict(self._weights)

    def dense(self) -> list[Fraction]:
        return [self.weight(k) for k in range(self.space.size)]

    def mass(self, tv: TruthVector) -> Fraction:
        if tv.size != self.space.size:
            raise SignatureMismatchError("truth vector from a different world space")
        bits = tv.bits
        return sum((w for k, w in self._weights.items() if bits >> k & 1), Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, Distribution)
            and self.space == other.space
            and self._weights == other._weights
        )

    def __hash__(self):
        return hash(tuple(self._weights.items()))

    def __repr__(self):
        inner = ", ".join(f"{k}: {fmt(w)}" for k, w in self._weights.items())
        return f"Distribution({{{inner}}})"

    def dump(self) -> str:
        """``w <index> <p/q>`` per world of nonzero weight."""
        return "\n".join(f"w {k} {fmt(w)}" for k, w in self._weights.items())


def from_atom_probs(assignments: Mapping[Formula, object], ws: WorldSpace) -> Distribution:
    """Distribution given by the probability of each atom sentence.

    Every key must be true in exactly one world and every world must be
    covered exactly once.
    """
    weights = {}
    for f, value in assignments.items():
        tv = truth_vector(f, ws)
        if tv.count() != 1:
            raise DistributionError(f"{to_text(f)!r} is not an atom sentence (true in {tv.count()} worlds)")
        (k,) = tv.indices()
        if k in weights:
            raise DistributionError(f"world {k} assigned twice (again by {to_text(f)!r})")
        weights[k] = to_fraction(value)
    missing = [k for k in range(ws.size) if k not in weights]
    if missing:
        raise DistributionError(f"no probability given for world(s) {', '.join(map(str, missing))}")
    return Distribution(ws, weights)


def probability(d: Distribution, f: Formula) -> Fraction:
    """Sum of the weights of the worlds where the ground quantifier-free ``f`` holds."""
    return d.mass(truth_vector(f, d.space))


def conditional(d: Distribution, a: Formula, b: Formula):
    """``p[a | b]``, or ``UNDEFINED`` when ``p[b] = 0``."""
    tb = truth_vector(b, d.space)
    pb = d.mass(tb)
    if pb == 0:
        return UNDEFINED
    return d.mass(truth_vector(a, d.space) & tb) / pb


@dataclass(frozen=True)
class AdditivityReport:
    disjoint: bool
    p_a: Fraction
    p_b: Fraction
    p_union: Fraction
    holds: bool | None  # None when the pair is not disjoint

    def __str__(self):
        if not self.disjoint:
            return "not disjoint; no additivity claim"
        verdict = "holds" if self.holds else "FAILS"
        return f"disjoint: {fmt(self.p_a)} + {fmt(self.p_b)} = {fmt(self.p_a + self.p_b)} vs p[a or b] = {fmt(self.p_union)}: {verdict}"


def check_additivity(d: Distribution, a: Formula, b: Formula) -> AdditivityReport:
    ta, tb = truth_vector(a, d.space), truth_vector(b, d.space)
    disjoint = (ta & tb).is_zero
    pa, pb = d.mass(ta), d.mass(tb)
    pu = probability(d, Or(a, b))
    return AdditivityReport(disjoint, pa, pb, pu, (pu == pa + pb) if disjoint else None)
