"""Dempster-Shafer belief functions, mass functions and their credal sets."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .core import CredalError, Event, SetFunction, WorldSpace, to_fraction
from .credal import CredalSet, EmptyCredalSet, natural_extension

MAX_BELIEF_WORLDS = 12


class NotABelief(CredalError):
    """The Möbius transform of a candidate belief function has a negative mass."""

    def __init__(self, witness: Event, masses: SetFunction):
        super().__init__(f"negative mass {masses(witness)} on {witness!r}")
        self.witness = witness
        self.masses = masses


def _check_size(space: WorldSpace) -> None:
    if len(space) > MAX_BELIEF_WORLDS:
        raise ValueError(f"belief tables are capped at {MAX_BELIEF_WORLDS} worlds")


def mobius_transform(f: SetFunction) -> SetFunction:
    """``m(V) = sum_{U subset V} (-1)^{|V - U|} f(U)`` via the fast subset transform."""
    _check_size(f.space)
    m = list(f.values)
    n = len(f.space)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                m[mask] -= m[mask ^ bit]
    return SetFunction(f.space, m)


def zeta_transform(m: SetFunction) -> SetFunction:
    """``f(U) = sum_{V subset U} m(V)``."""
    _check_size(m.space)
    f = list(m.values)
    n = len(m.space)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                f[mask] += f[mask ^ bit]
    return SetFunction(m.space, f)


class MassFunction:
    """Nonnegative masses on events, zero on the empty set, summing to one."""

    def __init__(self, space: WorldSpace, masses):
        if isinstance(masses, SetFunction):
            table = masses
        elif isinstance(masses, dict):
            values = [Fraction(0)] * (1 << len(space))
            for event, v in masses.items():
                if event.space != space:
                    raise ValueError("mass keys must be events on the same space")
                values[event.mask] += to_fraction(v)
            table = SetFunction(space, values)
        else:
            table = SetFunction(space, masses)
        if any(v < 0 for v in table.values):
            raise ValueError("masses must be nonnegative")
        if table.values[0] != 0:
            raise ValueError("the empty set must carry zero mass")
        if sum(table.values) != 1:
            raise ValueError(f"masses sum to {sum(table.values)}, not 1")
        self.space = space
        self.table = table

    def __call__(self, event: Event) -> Fraction:
        return self.table(event)

    def focal_events(self) -> list[Event]:
        return [e for e, v in self.table.items() if v]

    def __eq__(self, other) -> bool:
        return isinstance(other, MassFunction) and self.table == other.table

    def __repr__(self) -> str:
        body = ", ".join(f"{e!r}: {self(e)}" for e in self.focal_events())
        return f"MassFunction({body})"


class BeliefFunction:
    """A set function satisfying B1-B3, certified by nonnegative Möbius masses."""

    def __init__(self, values: SetFunction):
        if values(values.space.empty) != 0:
            raise ValueError("belief of the empty set must be 0")
        if values(values.space.full) != 1:
            raise ValueError("belief of the whole space must be 1")
        self.masses = mobius_from_belief(values)
        self.values = values
        self.space = values.space

    def __call__(self, event: Event) -> Fraction:
        return self.values(event)


def mobius_from_belief(bel: SetFunction) -> MassFunction:
    """Mass function of ``bel``; raises :class:`NotABelief` with a negative-mass witness."""
    if bel(bel.space.empty) != 0:
        raise ValueError("B1 fails: belief of the empty set must be 0")
    if bel(bel.space.full) != 1:
        raise ValueError("B2 fails: belief of the whole space must be 1")
    m = mobius_transform(bel)
    for event, v in m.items():
        if v < 0:
            raise NotABelief(event, m)
    return MassFunction(bel.space, m)


def belief_from_mass(m: MassFunction) -> BeliefFunction:
    return BeliefFunction(zeta_transform(m.table))


def plausibility(bel: BeliefFunction, event: Event) -> Fraction:
    return 1 - bel(event.complement())


def plausibility_function(bel: BeliefFunction) -> SetFunction:
    return SetFunction(bel.space, lambda e: plausibility(bel, e))


def credal_set_of_belief(bel: BeliefFunction) -> CredalSet:
    """``{mu : mu(U) >= Bel(U) for all U}``; its lower envelope is ``Bel`` again."""
    try:
        return natural_extension(bel.values)
    except EmptyCredalSet as exc:
        raise RuntimeError("belief function with an empty credal set") from exc


def check_b3(f: SetFunction, collection: Sequence[Event]) -> bool:
    """``f(union) >= sum over nonempty index sets of (-1)^(|I|+1) f(intersection)``."""
    if not collection:
        raise ValueError("B3 needs a nonempty collection")
    space = f.space
    union = space.empty
    for e in collection:
        union = union | e
    rhs = Fraction(0)
    for size in range(1, len(collection) + 1):
        sign = 1 if size % 2 else -1
        for idx in combinations(range(len(collection)), size):
            inter = space.full
            for j in idx:
                inter = inter & collection[j]
            rhs += sign * f(inter)
    return f(union) >= rhs


def b3_violation(f: SetFunction, max_size: int = 3) -> Optional[tuple[Event, ...]]:
    """Search collections of distinct events up to ``max_size`` for a B3 failure."""
    events = list(f.space.events())
    for size in range(2, max_size + 1):
        for collection in combinations(events, size):
            if not check_b3(f, collection):
                return collection
    return None
