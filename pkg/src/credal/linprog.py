"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`~fractions.Fraction` using
Bland's rule, which guarantees termination without any tolerance.  On top of
it sit a Charnes-Cooper solver for linear-fractional objectives and a brute
force vertex enumerator used as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import CredalError, RationalLike, to_fraction

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = {"<=": LE, "≤": LE, "=": EQ, "==": EQ, ">=": GE, "≥": GE}

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class DenominatorIdenticallyZero(CredalError):
    """The denominator of a linear-fractional objective vanishes on the feasible set."""


class DimensionTooLarge(CredalError):
    """Vertex enumeration was asked for more variables than the configured limit."""


@dataclass(frozen=True)
class LinearConstraint:
    """``coefficients . x  relation  rhs``."""

    coefficients: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __init__(self, coefficients: Iterable[RationalLike], relation: str, rhs: RationalLike):
        try:
            relation = _RELATIONS[relation]
        except KeyError:
            raise ValueError(f"unknown relation {relation!r}") from None
        object.__setattr__(self, "coefficients", tuple(to_fraction(c) for c in coefficients))
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "rhs", to_fraction(rhs))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, x)), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        value = self.lhs(x)
        if self.relation == LE:
            return value <= self.rhs
        if self.relation == GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """Optimize ``objective . x`` subject to ``constraints``.

    Variables are nonnegative except those listed in ``free``.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[LinearConstraint, ...]
    sense: str = "min"
    free: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(to_fraction(c) for c in self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "free", frozenset(self.free))
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        n = len(self.objective)
        for c in self.constraints:
            if len(c.coefficients) != n:
                raise ValueError(
                    f"constraint has {len(c.coefficients)} coefficients, program has {n} variables")
        if any(not 0 <= j < n for j in self.free):
            raise ValueError("free variable index out of range")

    @property
    def n_variables(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if any(x[j] < 0 for j in range(len(x)) if j not in self.free):
            return False
        return all(c.holds(x) for c in self.constraints)


@dataclass(frozen=True)
class LPOutcome:
    status: str
    value: Optional[Fraction] = None
    witness: Optional[tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Canonical-form tableau: ``rows[i]`` holds ``A | b`` with ``basis[i]`` basic."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], n_cols: int):
        self.rows = rows
        self.basis = basis
        self.n_cols = n_cols

    def pivot(self, r: int, c: int, cost: list[Fraction]) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row = [v / piv for v in row]
            self.rows[r] = row
        nz = [(j, v) for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[c]
                if f:
                    for j, v in nz:
                        other[j] -= f * v
        f = cost[c]
        if f:
            for j, v in nz:
                cost[j] -= f * v
        self.basis[r] = c

    def reduced_costs(self, c: Sequence[Fraction]) -> list[Fraction]:
        """Row ``c - c_B B^-1 A`` with ``-c_B B^-1 b`` in the last slot."""
        cost = list(c) + [Fraction(0)]
        for i, row in enumerate(self.rows):
            cb = cost[self.basis[i]]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        cost[j] -= cb * v
        return cost

    def run(self, cost: list[Fraction], allowed: int) -> str:
        """Minimize with Bland's rule over columns ``< allowed``."""
        while True:
            entering = next((j for j in range(allowed) if cost[j] < 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering, cost)


def solve_lp(program: LinearProgram) -> LPOutcome:
    """Solve ``program`` exactly.

    The returned witness is a basic feasible solution and is re-checked by
    substitution before being handed back.
    """
    n = program.n_variables
    # free variables are split into a positive and a negative part
    col_of: list[tuple[int, int]] = []
    for j in range(n):
        col_of.append((j, 1))
        if j in program.free:
            col_of.append((j, -1))
    n_struct = len(col_of)

    sign = 1 if program.sense == "min" else -1
    c_struct = [sign * program.objective[j] * s for j, s in col_of]

    raw = []
    for con in program.constraints:
        coeffs = [con.coefficients[j] * s for j, s in col_of]
        rel, rhs = con.relation, con.rhs
        if rhs < 0:
            coeffs = [-a for a in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        raw.append((coeffs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in raw if rel != EQ)
    n_art = sum(1 for _, rel, _ in raw if rel != LE)
    n_cols = n_struct + n_slack + n_art
    rows, basis = [], []
    s_col, a_col = n_struct, n_struct + n_slack
    for coeffs, rel, rhs in raw:
        row = coeffs + [Fraction(0)] * (n_slack + n_art) + [rhs]
        if rel == LE:
            row[s_col] = Fraction(1)
            basis.append(s_col)
            s_col += 1
        else:
            if rel == GE:
                row[s_col] = Fraction(-1)
                s_col += 1
            row[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        rows.append(row)

    tab = _Tableau(rows, basis, n_cols)
    first_art = n_struct + n_slack
    if n_art:
        phase1 = [Fraction(0)] * first_art + [Fraction(1)] * n_art
        cost = tab.reduced_costs(phase1)
        tab.run(cost, n_cols)
        if cost[-1] != 0:
            return LPOutcome(INFEASIBLE)
        # drive zero-level artificials out of the basis or drop redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= first_art:
                row = tab.rows[i]
                k = next((j for j in range(first_art) if row[j] != 0), None)
                if k is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, k, [Fraction(0)] * (n_cols + 1))
            i += 1

    phase2 = c_struct + [Fraction(0)] * (n_cols - n_struct)
    cost = tab.reduced_costs(phase2)
    status = tab.run(cost, first_art)
    if status == UNBOUNDED:
        return LPOutcome(UNBOUNDED)

    expanded = [Fraction(0)] * n_cols
    for i, b in enumerate(tab.basis):
        expanded[b] = tab.rows[i][-1]
    x = [Fraction(0)] * n
    for k, (j, s) in enumerate(col_of):
        x[j] += s * expanded[k]
    value = sum((a * v for a, v in zip(program.objective, x)), Fraction(0))
    if value != -sign * cost[-1] or not program.is_feasible_point(x):
        raise AssertionError("simplex produced an inconsistent witness")
    return LPOutcome(OPTIMAL, value, tuple(x))


def is_feasible(constraints: Sequence[LinearConstraint], n: int) -> bool:
    """Whether ``{x >= 0 : constraints}`` is nonempty."""
    return solve_lp(LinearProgram((Fraction(0),) * n, tuple(constraints))).optimal


def solve_linear_fractional(numerator: Sequence[RationalLike],
                            denominator: Sequence[RationalLike],
                            constraints: Sequence[LinearConstraint],
                            sense: str = "min") -> LPOutcome:
    """Optimize ``(num . x) / (den . x)`` over ``{x >= 0 : constraints, den . x > 0}``.

    Charnes-Cooper: substitute ``y = t x`` with ``den . y = 1`` and solve the
    resulting LP in ``(y, t)``.  Because the LP ranges over the closure
    ``t >= 0``, the value is the infimum (supremum) over the positive
    denominator region even when it is only approached in the limit.
    """
    num = [to_fraction(v) for v in numerator]
    den = [to_fraction(v) for v in denominator]
    n = len(num)
    if len(den) != n:
        raise ValueError("numerator and denominator differ in length")
    if not is_feasible(constraints, n):
        return LPOutcome(INFEASIBLE)
    cons = []
    for c in constraints:
        cons.append(LinearConstraint(c.coefficients + (-c.rhs,), c.relation, 0))
    cons.append(LinearConstraint(den + [Fraction(0)], EQ, 1))
    out = solve_lp(LinearProgram(tuple(num) + (Fraction(0),), tuple(cons), sense))
    if out.status == INFEASIBLE:
        raise DenominatorIdenticallyZero("denominator is zero on the whole feasible set")
    if out.status == UNBOUNDED:
        return out
    *y, t = out.witness
    if t == 0:
        # optimum sits on a recession direction; only the limiting value exists
        return LPOutcome(OPTIMAL, out.value, None)
    return LPOutcome(OPTIMAL, out.value, tuple(v / t for v in y))


def solve_linear_system(rows: Sequence[Sequence[Fraction]],
                        rhs: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Unique solution of a square-or-tall exact system, else ``None``."""
    if not rows:
        return None
    n = len(rows[0])
    m = [[to_fraction(v) for v in r] + [to_fraction(b)] for r, b in zip(rows, rhs)]
    piv_row = 0
    pivots = []
    for col in range(n):
        p = next((i for i in range(piv_row, len(m)) if m[i][col] != 0), None)
        if p is None:
            return None
        m[piv_row], m[p] = m[p], m[piv_row]
        pv = m[piv_row][col]
        m[piv_row] = [v / pv for v in m[piv_row]]
        for i in range(len(m)):
            if i != piv_row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[piv_row])]
        pivots.append(col)
        piv_row += 1
    if any(m[i][-1] != 0 for i in range(piv_row, len(m))):
        return None
    return [m[i][-1] for i in range(n)]


def _rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [[to_fraction(v) for v in r] for r in rows]
    rank = 0
    n = len(m[0]) if m else 0
    for col in range(n):
        p = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def enumerate_vertices(constraints: Sequence[LinearConstraint], n: Optional[int] = None,
                       max_dim: int = 10) -> list[tuple[Fraction, ...]]:
    """Extreme points of ``{x >= 0 : constraints}`` by exhaustive basis enumeration.

    Every choice of ``n - rank(equalities)`` tight inequalities (including
    the nonnegativity bounds) is solved exactly; feasible unique solutions
    are kept once.  Output is sorted in descending lexicographic order.
    """
    if n is None:
        if not constraints:
            raise ValueError("cannot infer the dimension from an empty constraint list")
        n = len(constraints[0].coefficients)
    if n > max_dim:
        raise DimensionTooLarge(f"{n} variables exceeds the vertex enumeration limit {max_dim}")
    eqs = [c for c in constraints if c.relation == EQ]
    ineqs = [c for c in constraints if c.relation != EQ]
    for j in range(n):
        ineqs.append(LinearConstraint([int(k == j) for k in range(n)], GE, 0))
    eq_rows = [list(c.coefficients) for c in eqs]
    eq_rank = _rank(eq_rows) if eq_rows else 0
    need = n - eq_rank
    found = set()
    for chosen in combinations(ineqs, need):
        rows = eq_rows + [list(c.coefficients) for c in chosen]
        rhs = [c.rhs for c in eqs] + [c.rhs for c in chosen]
        x = solve_linear_system(rows, rhs)
        if x is None:
            continue
        if all(v >= 0 for v in x) and all(c.holds(x) for c in constraints):
            found.add(tuple(x))
    return sorted(found, reverse=True)
