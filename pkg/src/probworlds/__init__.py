"""Exact probability distributions over possible worlds.

Sentence probabilities, tight entailment bounds by rational linear
programming, and the penguin default-reasoning anomaly.
"""

from .defaults import (
    DefaultRule,
    anomaly,
    exception_inconsistency,
    existential_penguin_bound,
    penguin_chain,
    max_penguin_instance,
    penguin_kb,
)
from .entailment import Bounds, compile_kb, is_consistent, minimal_conflict, query_bounds
from .errors import ProbWorldsError
from .kb import ConditionalBound, Interval, KnowledgeBase, Point, Schema
from .kbfile import load_distribution, load_kb, parse_kb
from .lp import LinearConstraint, LPProblem, solve
from .measure import UNDEFINED, Distribution, check_additivity, conditional, from_atom_probs, probability
from .quantifiers import HerbrandDomain, certain_universal_facts, check_quantifier_monotonicity, expand
from .syntax import Signature, free_variables, parse_formula, substitute, to_text
from .worlds import WorldSpace, atom_sentence, enumerate_worlds, satisfies, truth_vector

__version__ = "0.1.0"
