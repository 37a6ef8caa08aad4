"""Checks that a candidate set function or functional is a genuine lower envelope.

Coherence is decided with linear programs: build the natural extension
``{mu : mu(U) >= f(U) for all U}`` and test that every value of ``f`` is
attained there.  The cover inequality is provided separately as a verifier
for the direct direction (every lower probability satisfies it).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterator, Optional, Sequence

from .core import Event, Gamble, SetFunction, WorldSpace, indicator, to_fraction
from .credal import CredalSet, EmptyCredalSet, lower_probability, natural_extension

COHERENT = "coherent"
INCOHERENT = "incoherent"
NOT_NORMALIZED = "not-normalized"


@dataclass(frozen=True)
class Cover:
    """``collection`` covers ``target`` exactly ``m + n`` times and its complement ``m`` times."""

    collection: tuple[Event, ...]
    target: Event
    m: int
    n: int


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Optional[Event] = None
    attained: Optional[Fraction] = None

    @property
    def coherent(self) -> bool:
        return self.status == COHERENT


def _counts(collection: Sequence[Event], n_worlds: int) -> list[int]:
    counts = [0] * n_worlds
    for e in collection:
        for i in e.members:
            counts[i] += 1
    return counts


def verify_cover(collection: Sequence[Event], target: Event) -> Optional[Cover]:
    """Return the :class:`Cover` if the incidence counts are uniform on ``target``
    and on its complement with the former at least the latter, else ``None``."""
    space = target.space
    if any(e.space != space for e in collection):
        raise ValueError("cover events live on different spaces")
    counts = _counts(collection, len(space))
    on = {counts[i] for i in target.members}
    off = {counts[i] for i in range(len(space)) if i not in target.members}
    if len(on) > 1 or len(off) > 1:
        return None
    if not on:
        m, n = off.pop(), 0
    elif not off:
        m, n = on.pop(), 0
    else:
        a, b = on.pop(), off.pop()
        if a < b:
            return None
        m, n = b, a - b
    return Cover(tuple(collection), target, m, n)


def check_cover_inequality(f: SetFunction, cover: Cover) -> bool:
    """``sum f(U_i) <= m + n f(U)``, exactly."""
    total = sum((f(e) for e in cover.collection), Fraction(0))
    return total <= cover.m + cover.n * f(cover.target)


def enumerate_covers(space: WorldSpace, max_k: int = 4, max_worlds: int = 4) -> Iterator[Cover]:
    """Every (multiset of at most ``max_k`` events, target) pair forming a cover."""
    if len(space) > max_worlds:
        raise ValueError(f"cover search is capped at {max_worlds} worlds")
    events = list(space.events())
    for k in range(1, max_k + 1):
        for collection in combinations_with_replacement(events, k):
            counts = _counts(collection, len(space))
            levels = sorted(set(counts))
            if len(levels) == 1:
                for target in events:
                    yield verify_cover(collection, target)
            elif len(levels) == 2:
                hi = frozenset(i for i, c in enumerate(counts) if c == levels[1])
                yield Cover(collection, Event(space, hi), levels[0], levels[1] - levels[0])


def satisfies_cover_property(f: SetFunction, max_k: int = 4) -> Optional[Cover]:
    """First cover violating the inequality, or ``None`` if all pass."""
    for cover in enumerate_covers(f.space, max_k, max_worlds=len(f.space)):
        if not check_cover_inequality(f, cover):
            return cover
    return None


def conjugate(f: SetFunction) -> SetFunction:
    """``U -> 1 - f(complement U)``: the upper function paired with a lower one."""
    full = (1 << len(f.space)) - 1
    return SetFunction(f.space, [1 - f.values[full ^ mask] for mask in range(full + 1)])


def _disjoint_pairs(space: WorldSpace):
    size = 1 << len(space)
    for u in range(size):
        for v in range(size):
            if u & v == 0:
                yield u, v


def superadditivity_violation(f: SetFunction) -> Optional[tuple[Event, Event]]:
    """A disjoint pair breaking ``f(U|V) >= f(U)+f(V)`` or the conjugate subadditivity."""
    g = conjugate(f)
    lo, up = f.values, g.values
    for u, v in _disjoint_pairs(f.space):
        if lo[u | v] < lo[u] + lo[v] or up[u | v] > up[u] + up[v]:
            return f.space.event_from_mask(u), f.space.event_from_mask(v)
    return None


def mixed_bound_violation(f: SetFunction) -> Optional[tuple[Event, Event]]:
    """A disjoint pair breaking ``f(U|V) <= f(U) + g(V) <= g(U|V)`` where ``g`` is the conjugate."""
    g = conjugate(f)
    lo, up = f.values, g.values
    for u, v in _disjoint_pairs(f.space):
        middle = lo[u] + up[v]
        if not lo[u | v] <= middle <= up[u | v]:
            return f.space.event_from_mask(u), f.space.event_from_mask(v)
    return None


def is_coherent_lower_probability(f: SetFunction) -> Verdict:
    """Decide whether ``f`` is the lower probability of some credal set.

    ``f`` is coherent iff its natural extension is nonempty and attains
    ``f(U)`` as its minimum of ``mu(U)`` on every event.  The witness of an
    incoherent verdict is the first event (in bitmask order) whose minimum
    exceeds ``f``; an empty natural extension gives no witness event.
    """
    if f(f.space.full) != 1:
        return Verdict(NOT_NORMALIZED, f.space.full, f(f.space.full))
    try:
        pf = natural_extension(f)
    except EmptyCredalSet:
        return Verdict(INCOHERENT)
    for event, value in f.items():
        attained = lower_probability(pf, event)
        if attained != value:
            return Verdict(INCOHERENT, event, attained)
    return Verdict(COHERENT)


def recover_largest_credal_set(bounds: Sequence[tuple[Gamble, object]]) -> CredalSet:
    """``{mu : E_mu(X) >= bound(X)}`` over the listed gambles.

    Raises :class:`EmptyCredalSet` when no measure meets every bound.
    """
    bounds = [(x, to_fraction(b)) for x, b in bounds]
    return natural_extension(bounds)


def indicator_bounds(f: SetFunction) -> list[tuple[Gamble, Fraction]]:
    return [(indicator(e), v) for e, v in f.items()]

