"""Possible worlds over the ground atoms of a signature.

World ``k`` assigns ground atom ``i`` the value of bit ``i`` of ``k``
(1 = true).  A truth vector is stored as a Python integer whose bit ``k``
is the truth value in world ``k``, so Boolean connectives become single
bitwise operations even for a million worlds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .errors import EvaluationError, SignatureMismatchError, WorldSpaceTooLargeError
from .syntax import (
    Atom,
    And,
    Bottom,
    Const,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Signature,
    Top,
    conjoin,
    disjoin,
    to_text,
)

DEFAULT_MAX_ATOMS = 20


@dataclass(frozen=True)
class GroundAtomSet:
    """All ground atoms of a signature in canonical order.

    Predicates in declaration order; for each predicate, constant tuples in
    lexicographic order of the declared constant ordering.
    """

    atoms: tuple[Atom, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {a: i for i, a in enumerate(self.atoms)}
        if len(index) != len(self.atoms):
            raise ValueError("duplicate ground atoms")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_signature(cls, sig: Signature) -> "GroundAtomSet":
        atoms = []
        for name, arity in sig.predicates:
            for args in itertools.product(sig.constants, repeat=arity):
                atoms.append(Atom(name, tuple(Const(c) for c in args)))
        return cls(tuple(atoms))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def index(self, a: Atom) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise SignatureMismatchError(f"ground atom {to_text(a)} is not in the world space") from None

    def __contains__(self, a):
        return a in self._index


@dataclass(frozen=True)
class TruthVector:
    """Truth value of one formula in every world, packed into an int."""

    bits: int
    size: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.size:
            raise ValueError("truth vector bits out of range")

    @classmethod
    def from_bools(cls, values) -> "TruthVector":
        values = list(values)
        bits = 0
        for k, v in enumerate(values):
            if v:
                bits |= 1 << k
        return cls(bits, len(values))

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def _check(self, other):
        if self.size != other.size:
            raise ValueError("truth vectors over different world spaces")

    def __and__(self, other):
        self._check(other)
        return TruthVector(self.bits & other.bits, self.size)

    def __or__(self, other):
        self._check(other)
        return TruthVector(self.bits | other.bits, self.size)

    def __invert__(self):
        return TruthVector(self.full ^ self.bits, self.size)

    def __le__(self, other):
        """Componentwise order: true in ``self`` implies true in ``other``."""
        self._check(other)
        return self.bits & ~other.bits == 0

    def __len__(self):
        return self.size

    def __getitem__(self, k):
        if not 0 <= k < self.size:
            raise IndexError(k)
        return bool(self.bits >> k & 1)

    def __iter__(self):
        return (bool(self.bits >> k & 1) for k in range(self.size))

    def indices(self) -> Iterator[int]:
        """Indices of the worlds where the formula holds, ascending."""
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length() - 1
            b ^= low

    def count(self) -> int:
        return bin(self.bits).count("1")

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == self.full

    def __repr__(self):
        return "TruthVector(" + "".join("1" if v else "0" for v in self) + ")"


@dataclass(frozen=True)
class World:
    space: "WorldSpace" = field(repr=False)
    index: int

    def value(self, a: Atom) -> bool:
        return bool(self.index >> self.space.atoms.index(a) & 1)

    @property
    def values(self) -> tuple[bool, ...]:
        return tuple(bool(self.index >> i & 1) for i in range(len(self.space.atoms)))

    def true_atoms(self) -> list[Atom]:
        return [a for i, a in enumerate(self.space.atoms) if self.index >> i & 1]

    def describe(self) -> str:
        return " ".join(
            f"{to_text(a)}={'t' if v else 'f'}" for a, v in zip(self.space.atoms, self.values)
        )

    def __str__(self):
        return f"world {self.index}: {self.describe()}"


class WorldSpace:
    """The 2^n worlds of a ground atom set, in canonical order."""

    def __init__(self, sig: Signature, max_atoms: int = DEFAULT_MAX_ATOMS):
        self.signature = sig
        self.atoms = GroundAtomSet.from_signature(sig)
        if len(self.atoms) > max_atoms:
            raise WorldSpaceTooLargeError(len(self.atoms), max_atoms)
        self.max_atoms = max_atoms
        self.size = 1 << len(self.atoms)
        self._atom_masks = [_bit_pattern(i, len(self.atoms)) for i in range(len(self.atoms))]

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def __len__(self):
        return self.size

    def __iter__(self) -> Iterator[World]:
        return (World(self, k) for k in range(self.size))

    def __getitem__(self, k) -> World:
        if not 0 <= k < self.size:
            raise IndexError(k)
        return World(self, k)

    def __eq__(self, other):
        return isinstance(other, WorldSpace) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        return f"WorldSpace({self.n_atoms} atoms, {self.size} worlds)"

    def world(self, assignment: dict[Atom, bool]) -> World:
        """World from an explicit assignment of every ground atom."""
        if set(assignment) != set(self.atoms):
            raise SignatureMismatchError("assignment must cover exactly the ground atoms")
        k = sum(1 << self.atoms.index(a) for a, v in assignment.items() if v)
        return World(self, k)

    def atom_vector(self, a: Atom) -> TruthVector:
        return TruthVector(self._atom_masks[self.atoms.index(a)], self.size)

    def constant(self, value: bool) -> TruthVector:
        return TruthVector((1 << self.size) - 1 if value else 0, self.size)

    def dump(self) -> str:
        return "\n".join(str(w) for w in self)


def _bit_pattern(i: int, n: int) -> int:
    """Mask of the worlds ``k < 2**n`` whose bit ``i`` is set."""
    half = 1 << i
    period = half << 1
    unit = ((1 << half) - 1) << half
    reps = (1 << n) // period
    # geometric series of ``unit`` shifted by multiples of ``period``
    return unit * (((1 << (period * reps)) - 1) // ((1 << period) - 1))


def enumerate_worlds(sig: Signature, max_atoms: int = DEFAULT_MAX_ATOMS) -> WorldSpace:
    return WorldSpace(sig, max_atoms)


def _reject(f, why):
    raise EvaluationError(f"cannot evaluate {to_text(f)!r} directly in a world: {why}")


def satisfies(w: World, f: Formula) -> bool:
    """Truth of a ground, quantifier-free formula in ``w``."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        if not f.is_ground:
            _reject(f, "non-ground atom")
        return w.value(f)
    if isinstance(f, Not):
        return not satisfies(w, f.body)
    if isinstance(f, And):
        return satisfies(w, f.left) and satisfies(w, f.right)
    if isinstance(f, Or):
        return satisfies(w, f.left) or satisfies(w, f.right)
    if isinstance(f, Implies):
        return (not satisfies(w, f.left)) or satisfies(w, f.right)
    if isinstance(f, Iff):
        return satisfies(w, f.left) == satisfies(w, f.right)
    if isinstance(f, (ForAll, Exists)):
        _reject(f, "quantified; expand it over the domain first")
    raise TypeError(f"not a formula: {f!r}")


def truth_vector(f: Formula, ws: WorldSpace) -> TruthVector:
    """Truth value of ``f`` in every world of ``ws``."""
    if isinstance(f, Top):
        return ws.constant(True)
    if isinstance(f, Bottom):
        return ws.constant(False)
    if isinstance(f, Atom):
        if not f.is_ground:
            _reject(f, "non-ground atom")
        return ws.atom_vector(f)
    if isinstance(f, Not):
        return ~truth_vector(f.body, ws)
    if isinstance(f, And):
        return truth_vector(f.left, ws) & truth_vector(f.right, ws)
    if isinstance(f, Or):
        return truth_vector(f.left, ws) | truth_vector(f.right, ws)
    if isinstance(f, Implies):
        return ~truth_vector(f.left, ws) | truth_vector(f.right, ws)
    if isinstance(f, Iff):
        left, right = truth_vector(f.left, ws), truth_vector(f.right, ws)
        return (left & right) | (~left & ~right)
    if isinstance(f, (ForAll, Exists)):
        _reject(f, "quantified; expand it over the domain first")
    raise TypeError(f"not a formula: {f!r}")


def atom_sentence(w: World) -> Formula:
    """The complete conjunction of literals that holds in ``w`` and nowhere else."""
    return conjoin(a if v else Not(a) for a, v in zip(w.space.atoms, w.values))


def disjunctive_form(f: Formula, ws: WorldSpace) -> Formula:
    """``f`` rewritten as the disjunction of the atom sentences of its worlds."""
    return disjoin(atom_sentence(ws[k]) for k in truth_vector(f, ws).indices())
