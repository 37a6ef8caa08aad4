"""Credal sets and their lower/upper envelopes.

A :class:`CredalSet` is held either as a list of generating measures (the
convex hull of them, or just the finite set when ``hull=False``) or as a
list of linear constraints intersected with the probability simplex.
Bounds are computed exactly and always come with a witness measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .core import (
    CredalError,
    Event,
    Gamble,
    Measure,
    RationalLike,
    SetFunction,
    SpaceMismatch,
    WorldSpace,
    condition_measure,
    expectation_pointwise,
    indicator,
    to_fraction,
)
from .linprog import (
    EQ,
    GE,
    LE,
    LinearConstraint,
    LinearProgram,
    enumerate_vertices,
    is_feasible,
    solve_linear_fractional,
    solve_lp,
)


class EmptyCredalSet(CredalError):
    """The constraints describing a credal set admit no probability measure."""


class VacuousObservation(CredalError):
    """Every measure in the set gives the observed event probability zero."""


@dataclass(frozen=True)
class Interval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= to_fraction(x) <= self.upper

    def strictly_contains(self, other: "Interval") -> bool:
        """Superset of ``other`` and not equal to it."""
        return self.lower <= other.lower and other.upper <= self.upper and self != other

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


@dataclass(frozen=True)
class Bound:
    """An attained lower or upper bound together with a measure attaining it."""

    value: Fraction
    witness: Optional[Measure]


def simplex_constraint(n: int) -> LinearConstraint:
    return LinearConstraint([1] * n, EQ, 1)


def constraint_on(space: WorldSpace, coefficients, relation: str, rhs: RationalLike
                  ) -> LinearConstraint:
    """Build a constraint from a ``{label: coefficient}`` mapping (missing labels are 0)."""
    if isinstance(coefficients, Gamble):
        coefficients = coefficients.values
    elif isinstance(coefficients, dict):
        unknown = set(coefficients) - set(space.labels)
        if unknown:
            raise KeyError(f"unknown worlds {sorted(unknown)}")
        coefficients = [coefficients.get(label, 0) for label in space.labels]
    return LinearConstraint(coefficients, relation, rhs)


class CredalSet:
    """A set of probability measures on one finite world space.

    Use :meth:`from_generators` or :meth:`from_constraints`; both forms are
    immutable and answer the same queries.
    """

    def __init__(self, space: WorldSpace, *, generators: Optional[Sequence[Measure]] = None,
                 constraints: Optional[Sequence[LinearConstraint]] = None, hull: bool = True):
        if (generators is None) == (constraints is None):
            raise ValueError("give exactly one of generators or constraints")
        self.space = space
        self.hull = hull
        if generators is not None:
            generators = tuple(generators)
            if not generators:
                raise EmptyCredalSet("a generator list must be nonempty")
            for g in generators:
                if not isinstance(g, Measure):
                    raise TypeError("generators must be Measure instances")
                if g.space != space:
                    raise SpaceMismatch("generator lives on a different space")
            self.generators: Optional[tuple[Measure, ...]] = generators
            self.constraints: Optional[tuple[LinearConstraint, ...]] = None
        else:
            constraints = tuple(constraints)
            for c in constraints:
                if len(c.coefficients) != len(space):
                    raise ValueError("constraint dimension does not match the world space")
            if not is_feasible((*constraints, simplex_constraint(len(space))), len(space)):
                raise EmptyCredalSet("no probability measure satisfies the constraints")
            self.generators = None
            self.constraints = constraints
            self.hull = True

    @classmethod
    def from_generators(cls, measures: Iterable[Measure], hull: bool = True) -> "CredalSet":
        measures = tuple(measures)
        if not measures:
            raise EmptyCredalSet("a generator list must be nonempty")
        return cls(measures[0].space, generators=measures, hull=hull)

    @classmethod
    def from_constraints(cls, space: WorldSpace, constraints: Iterable[LinearConstraint]
                         ) -> "CredalSet":
        return cls(space, constraints=tuple(constraints))

    @classmethod
    def singleton(cls, mu: Measure) -> "CredalSet":
        return cls(mu.space, generators=(mu,), hull=False)

    @classmethod
    def simplex(cls, space: WorldSpace) -> "CredalSet":
        return cls(space, constraints=())

    @property
    def form(self) -> str:
        return "generators" if self.generators is not None else "constraints"

    def full_constraints(self) -> tuple[LinearConstraint, ...]:
        assert self.constraints is not None
        return (*self.constraints, simplex_constraint(len(self.space)))

    def __repr__(self) -> str:
        if self.generators is not None:
            return f"CredalSet({len(self.generators)} generators, hull={self.hull})"
        return f"CredalSet({len(self.constraints)} constraints)"

    # -- envelopes -------------------------------------------------------

    def bound(self, x: Gamble, sense: str = "min") -> Bound:
        """Lower (``sense="min"``) or upper expectation of ``x`` with a witness."""
        if x.space != self.space:
            raise SpaceMismatch("gamble lives on a different space")
        if self.generators is not None:
            pick = min if sense == "min" else max
            best = pick(self.generators, key=lambda g: expectation_pointwise(g, x))
            return Bound(expectation_pointwise(best, x), best)
        out = solve_lp(LinearProgram(x.values, self.full_constraints(), sense))
        return Bound(out.value, Measure(self.space, out.witness))

    def conditional_bound(self, x: Gamble, given: Event, sense: str = "min") -> Bound:
        """Bound on ``E_mu(x | given)`` over members with ``mu(given) > 0``."""
        if x.space != self.space or given.space != self.space:
            raise SpaceMismatch("query lives on a different space")
        num = [v if i in given.members else Fraction(0) for i, v in enumerate(x.values)]
        den = indicator(given).values
        if self.generators is not None:
            live = [g for g in self.generators if g.prob(given) > 0]
            if not live:
                raise VacuousObservation(f"every generator gives {given!r} probability zero")
            if not self.hull:
                pick = min if sense == "min" else max
                best = pick(live, key=lambda g: expectation_pointwise(condition_measure(g, given), x))
                cond = condition_measure(best, given)
                return Bound(expectation_pointwise(cond, x), cond)
            # linear-fractional program in mixture-weight space
            k = len(self.generators)
            wnum = [expectation_pointwise(g, Gamble(self.space, num)) for g in self.generators]
            wden = [g.prob(given) for g in self.generators]
            out = solve_linear_fractional(wnum, wden, [LinearConstraint([1] * k, EQ, 1)], sense)
            if out.witness is None:
                return Bound(out.value, None)
            return Bound(out.value, condition_measure(self._mix(out.witness), given))
        out = solve_lp(LinearProgram(den, self.full_constraints(), "max"))
        if out.value == 0:
            raise VacuousObservation(f"every member gives {given!r} probability zero")
        out = solve_linear_fractional(num, den, self.full_constraints(), sense)
        witness = None
        if out.witness is not None:
            witness = condition_measure(Measure(self.space, out.witness), given)
        return Bound(out.value, witness)

    def _mix(self, weights: Sequence[Fraction]) -> Measure:
        cols = [sum((w * g.weights[i] for w, g in zip(weights, self.generators)), Fraction(0))
                for i in range(len(self.space))]
        return Measure(self.space, cols)

    # -- geometry --------------------------------------------------------

    def vertices(self) -> list[Measure]:
        """Extreme points of the closed convex hull of the set."""
        if self.generators is not None:
            return list(convex_closure(self).generators)
        return [Measure(self.space, v)
                for v in enumerate_vertices(self.full_constraints(), len(self.space))]

    def to_generators(self) -> "CredalSet":
        """Same set in generator form (vertex enumeration for constraint sets)."""
        if self.generators is not None:
            return self
        return CredalSet.from_generators(self.vertices(), hull=True)

    def contains(self, mu: Measure) -> bool:
        """Membership; honours ``hull=False`` for finite generator lists."""
        if mu.space != self.space:
            raise SpaceMismatch("measure lives on a different space")
        if self.generators is None:
            return all(c.holds(mu.weights) for c in self.constraints)
        if not self.hull:
            return mu in self.generators
        return in_hull(mu, self.generators)

    def hull_contains(self, mu: Measure) -> bool:
        """Membership in the closed convex hull, regardless of ``hull``."""
        if self.generators is None:
            return self.contains(mu)
        return in_hull(mu, self.generators)


def in_hull(mu: Measure, generators: Sequence[Measure]) -> bool:
    """LP feasibility of ``mu = sum(l_i g_i)`` with ``l`` a probability vector."""
    k = len(generators)
    cons = [LinearConstraint([1] * k, EQ, 1)]
    for i in range(len(mu.space)):
        cons.append(LinearConstraint([g.weights[i] for g in generators], EQ, mu.weights[i]))
    return is_feasible(cons, k)


AnyCredal = Union[CredalSet, "ConditionalCredalSet"]


class ConditionalCredalSet:
    """``P | U`` for a constraint-form ``P``, answered lazily.

    Every query becomes a linear-fractional program over the original
    constraints restricted to ``mu(U) > 0``.
    """

    def __init__(self, base: CredalSet, given: Event):
        if upper_probability(base, given) == 0:
            raise VacuousObservation(f"every member gives {given!r} probability zero")
        self.base = base
        self.given = given
        self.space = base.space

    def bound(self, x: Gamble, sense: str = "min") -> Bound:
        return self.base.conditional_bound(x, self.given, sense)

    def __repr__(self) -> str:
        return f"ConditionalCredalSet({self.base!r} | {self.given!r})"


def lower_expectation_bound(p: AnyCredal, x: Gamble) -> Bound:
    return p.bound(x, "min")


def upper_expectation_bound(p: AnyCredal, x: Gamble) -> Bound:
    return p.bound(x, "max")


def lower_expectation(p: AnyCredal, x: Gamble) -> Fraction:
    """``inf { E_mu(x) : mu in P }``."""
    return p.bound(x, "min").value


def upper_expectation(p: AnyCredal, x: Gamble) -> Fraction:
    """``sup { E_mu(x) : mu in P }``, computed as ``-lower_expectation(P, -x)``."""
    return -lower_expectation(p, -x)


def lower_probability(p: AnyCredal, event: Event) -> Fraction:
    return lower_expectation(p, indicator(event))


def upper_probability(p: AnyCredal, event: Event) -> Fraction:
    return upper_expectation(p, indicator(event))


def probability_interval(p: AnyCredal, event: Event) -> Interval:
    return Interval(lower_probability(p, event), upper_probability(p, event))


def lower_probability_function(p: AnyCredal) -> SetFunction:
    """``P_*`` tabulated on every event."""
    return SetFunction(p.space, lower_probability_table(p))


def lower_probability_table(p: AnyCredal) -> list[Fraction]:
    return [lower_probability(p, e) for e in p.space.events()]


def upper_probability_function(p: AnyCredal) -> SetFunction:
    return SetFunction(p.space, [upper_probability(p, e) for e in p.space.events()])


def _canonical_constraint(c: LinearConstraint) -> LinearConstraint:
    coeffs, rel, rhs = list(c.coefficients), c.relation, c.rhs
    if rel == GE:
        coeffs, rhs, rel = [-a for a in coeffs], -rhs, LE
    lead = next((a for a in coeffs if a != 0), None)
    if lead is not None:
        scale = abs(lead) if rel == LE else lead
        coeffs, rhs = [a / scale for a in coeffs], rhs / scale
    return LinearConstraint(coeffs, rel, rhs)


def convex_closure(p: CredalSet) -> CredalSet:
    """Smallest closed convex set containing ``p``.

    Generator lists are reduced to their extreme points (hull flag set);
    constraint lists are normalized, deduplicated and sorted.
    """
    if p.generators is None:
        canon = {_canonical_constraint(c) for c in p.constraints}
        canon.discard(LinearConstraint([0] * len(p.space), LE, 0))
        ordered = sorted(canon, key=lambda c: (c.relation, c.coefficients, c.rhs))
        return CredalSet.from_constraints(p.space, ordered)
    distinct = list(dict.fromkeys(p.generators))
    if len(distinct) == 1:
        return CredalSet.from_generators(distinct, hull=True)
    extreme = [g for i, g in enumerate(distinct)
               if not in_hull(g, distinct[:i] + distinct[i + 1:])]
    return CredalSet.from_generators(extreme, hull=True)


def equivalent_as_lower_expectation(p1: CredalSet, p2: CredalSet) -> bool:
    """Whether the two sets have the same closed convex hull (hence the same lower expectation)."""
    if p1.space != p2.space:
        raise SpaceMismatch("credal sets live on different spaces")
    return (all(p2.hull_contains(v) for v in p1.vertices())
            and all(p1.hull_contains(v) for v in p2.vertices()))


def natural_extension(bounds, space: Optional[WorldSpace] = None) -> CredalSet:
    """Largest credal set whose members respect every given lower bound.

    ``bounds`` is either a :class:`SetFunction` of event lower bounds or an
    iterable of ``(gamble, lower_bound)`` pairs.
    """
    if isinstance(bounds, SetFunction):
        space = bounds.space
        pairs = [(indicator(e), v) for e, v in bounds.items()]
    else:
        pairs = [(x, to_fraction(b)) for x, b in bounds]
        if not pairs and space is None:
            raise ValueError("need at least one bound or an explicit space")
        space = space or pairs[0][0].space
    cons = []
    for x, b in pairs:
        if x.space != space:
            raise SpaceMismatch("bound gamble lives on a different space")
        cons.append(LinearConstraint(x.values, GE, b))
    return CredalSet.from_constraints(space, cons)
