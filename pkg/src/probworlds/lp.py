"""Exact rational linear programming.

Two-phase dense-tableau simplex over ``fractions.Fraction`` with Bland's
rule, so it terminates on degenerate problems and is deterministic.
All variables are implicitly nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .rationals import fmt, to_fraction

LE, EQ, GE = "<=", "=", ">="
RELATIONS = (LE, EQ, GE)
_FLIP = {LE: GE, GE: LE, EQ: EQ}
ZERO = Fraction(0)


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeffs[i] * x[i]) <relation> bound`` with sparse coefficients."""

    coeffs: Mapping[int, Fraction]
    relation: str
    bound: Fraction
    label: Hashable = None

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        coeffs = {int(i): to_fraction(c) for i, c in self.coeffs.items()}
        object.__setattr__(self, "coeffs", {i: c for i, c in sorted(coeffs.items()) if c})
        object.__setattr__(self, "bound", to_fraction(self.bound))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * x[i] for i, c in self.coeffs.items()), ZERO)

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        v = self.lhs(x)
        if self.relation == LE:
            return v <= self.bound
        if self.relation == GE:
            return v >= self.bound
        return v == self.bound

    @property
    def is_trivial(self) -> bool:
        return not self.coeffs

    def __str__(self):
        terms = " + ".join(f"{fmt(c)}*x{i}" for i, c in self.coeffs.items()) or "0"
        return f"{terms} {self.relation} {fmt(self.bound)}"


@dataclass(frozen=True)
class LPProblem:
    n_vars: int
    constraints: tuple[LinearConstraint, ...]
    objective: Mapping[int, Fraction] = field(default_factory=dict)
    maximize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        obj = {int(i): to_fraction(c) for i, c in self.objective.items()}
        object.__setattr__(self, "objective", {i: c for i, c in sorted(obj.items()) if c})
        for con in self.constraints:
            for i in con.coeffs:
                if not 0 <= i < self.n_vars:
                    raise ValueError(f"constraint refers to variable {i} outside 0..{self.n_vars - 1}")
        for i in self.objective:
            if not 0 <= i < self.n_vars:
                raise ValueError(f"objective refers to variable {i} outside 0..{self.n_vars - 1}")

    def with_objective(self, objective: Mapping[int, Fraction], maximize: bool) -> "LPProblem":
        return LPProblem(self.n_vars, self.constraints, objective, maximize)

    def with_constraints(self, constraints) -> "LPProblem":
        return LPProblem(self.n_vars, tuple(constraints), self.objective, self.maximize)

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * x[i] for i, c in self.objective.items()), ZERO)

    def violated(self, x: Sequence[Fraction]) -> list[LinearConstraint]:
        if any(v < 0 for v in x):
            raise ValueError("negative variable in candidate point")
        return [c for c in self.constraints if not c.satisfied_by(x)]


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    witness: tuple[Fraction, ...]
    status = "optimal"


@dataclass(frozen=True)
class Infeasible:
    status = "infeasible"


@dataclass(frozen=True)
class Unbounded:
    status = "unbounded"


LPOutcome = Optimal | Infeasible | Unbounded


class _Tableau:
    """Rows ``A x = b`` in canonical form for the current basis plus a reduced-cost row."""

    def __init__(self, rows, rhs, basis, n_cols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.n_cols = n_cols
        self.cost_row = [ZERO] * n_cols
        self.cost_value = ZERO

    def set_costs(self, costs):
        """Reduced costs ``c_j - c_B . column_j`` for minimisation of ``costs``."""
        red = list(costs)
        value = ZERO
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb:
                row = self.rows[i]
                for j, a in enumerate(row):
                    if a:
                        red[j] -= cb * a
                value += cb * self.rhs[i]
        self.cost_row = red
        self.cost_value = value

    def pivot(self, r, c):
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            for j, a in enumerate(prow):
                if a:
                    prow[j] = a * inv
            self.rhs[r] *= inv
        nz = [j for j, a in enumerate(prow) if a]
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * prhs
        f = self.cost_row[c]
        if f:
            for j in nz:
                self.cost_row[j] -= f * prow[j]
            self.cost_value += f * prhs
        self.basis[r] = c

    def run(self, allowed):
        """Minimise the current cost row with Bland's rule; ``False`` if unbounded."""
        while True:
            enter = next((j for j in range(self.n_cols) if allowed[j] and self.cost_row[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def solve(problem: LPProblem) -> LPOutcome:
    """Exact optimum of ``problem``; the witness is verified before returning."""
    n = problem.n_vars
    rows_src = []
    for con in problem.constraints:
        if con.is_trivial:
            ok = {LE: 0 <= con.bound, GE: 0 >= con.bound, EQ: con.bound == 0}[con.relation]
            if not ok:
                return Infeasible()
            continue
        coeffs, rel, b = con.coeffs, con.relation, con.bound
        if b < 0:
            coeffs = {i: -c for i, c in coeffs.items()}
            rel, b = _FLIP[rel], -b
        rows_src.append((coeffs, rel, b))

    n_slack = sum(1 for _, rel, _ in rows_src if rel != EQ)
    n_art = sum(1 for _, rel, _ in rows_src if rel != LE)
    n_cols = n + n_slack + n_art
    rows, rhs, basis = [], [], []
    slack = n
    art = n + n_slack
    artificial = [False] * n_cols
    for coeffs, rel, b in rows_src:
        row = [ZERO] * n_cols
        for i, c in coeffs.items():
            row[i] = c
        if rel == LE:
            row[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        else:
            if rel == GE:
                row[slack] = Fraction(-1)
                slack += 1
            row[art] = Fraction(1)
            artificial[art] = True
            basis.append(art)
            art += 1
        rows.append(row)
        rhs.append(b)

    tab = _Tableau(rows, rhs, basis, n_cols)
    everything = [True] * n_cols

    if n_art:
        tab.set_costs([Fraction(1) if artificial[j] else ZERO for j in range(n_cols)])
        tab.run(everything)
        if tab.cost_value > 0:
            return Infeasible()
        _drive_out_artificials(tab, artificial)

    costs = [ZERO] * n_cols
    sign = -1 if problem.maximize else 1
    for i, c in problem.objective.items():
        costs[i] = sign * c
    tab.set_costs(costs)
    if not tab.run([not a for a in artificial]):
        return Unbounded()

    x = [ZERO] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rhs[i]
    witness = tuple(x)
    value = problem.objective_value(witness)
    if problem.violated(witness) or value != sign * tab.cost_value:
        raise AssertionError("simplex produced a witness that fails substitution")
    return Optimal(value, witness)


def _drive_out_artificials(tab, artificial):
    """Pivot zero-valued artificials out of the basis; drop redundant rows."""
    i = 0
    while i < len(tab.rows):
        if artificial[tab.basis[i]]:
            row = tab.rows[i]
            col = next((j for j, a in enumerate(row) if a and not artificial[j]), None)
            if col is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1


def is_feasible(problem: LPProblem) -> bool:
    return not isinstance(solve(problem.with_objective({}, True)), Infeasible)


def aggregate_columns(problem: LPProblem) -> tuple[LPProblem, list[int]]:
    """Merge variables whose columns (constraints and objective) are identical.

    Returns the reduced problem and, for each reduced variable, the lowest
    original index it stands for.  An optimum of the reduced problem placed
    on those representatives is an optimum of the original.
    """
    signature: dict[int, list] = {i: [] for i in range(problem.n_vars)}
    for k, con in enumerate(problem.constraints):
        for i, c in con.coeffs.items():
            signature[i].append((k, c))
    for i, c in problem.objective.items():
        signature[i].append((-1, c))
    groups: dict[tuple, int] = {}
    reps = []
    new_index = {}
    for i in range(problem.n_vars):
        key = tuple(signature[i])
        if key not in groups:
            groups[key] = len(reps)
            reps.append(i)
        new_index[i] = groups[key]
    reduced = LPProblem(
        len(reps),
        tuple(
            LinearConstraint({new_index[i]: c for i, c in con.coeffs.items() if reps[new_index[i]] == i},
                             con.relation, con.bound, con.label)
            for con in problem.constraints
        ),
        {new_index[i]: c for i, c in problem.objective.items() if reps[new_index[i]] == i},
        problem.maximize,
    )
    return reduced, reps


def solve_aggregated(problem: LPProblem) -> LPOutcome:
    """``solve`` after merging duplicate columns; the witness is lifted back."""
    reduced, reps = aggregate_columns(problem)
    if reduced.n_vars == problem.n_vars:
        return solve(problem)
    out = solve(reduced)
    if not isinstance(out, Optimal):
        return out
    x = [ZERO] * problem.n_vars
    for j, v in enumerate(out.witness):
        x[reps[j]] = v
    witness = tuple(x)
    if problem.violated(witness) or problem.objective_value(witness) != out.value:
        raise AssertionError("lifted witness fails substitution")
    return Optimal(out.value, witness)
