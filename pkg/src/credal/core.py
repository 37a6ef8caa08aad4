"""Finite world spaces, events, probability measures and gambles.

Every number held by these objects is a :class:`fractions.Fraction`; floats
are only accepted (and converted exactly) at the input boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence, Union

RationalLike = Union[int, str, Fraction, Decimal, float]


class CredalError(Exception):
    """Base class for every error raised by this package."""


class ZeroConditioningEvent(CredalError):
    """Conditioning a measure on an event it gives probability zero."""


class SpaceMismatch(CredalError, ValueError):
    """Objects defined on different world spaces were combined."""


def to_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Strings may be ``"p/q"``, integers or decimal literals (``".3"`` becomes
    ``3/10``).  Floats are converted through their shortest decimal repr,
    so ``0.3`` also becomes ``3/10`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class WorldSpace:
    """An ordered, finite, nonempty set of world labels."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise ValueError("a world space needs at least one world")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate world labels in {labels}")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown world {label!r}") from None

    def event(self, *labels: str) -> "Event":
        return Event(self, frozenset(self.index(label) for label in labels))

    def event_from_mask(self, mask: int) -> "Event":
        return Event(self, frozenset(i for i in range(len(self)) if mask >> i & 1))

    @property
    def full(self) -> "Event":
        return Event(self, frozenset(range(len(self))))

    @property
    def empty(self) -> "Event":
        return Event(self, frozenset())

    def events(self) -> Iterator["Event"]:
        """All ``2**n`` events, ordered by bitmask."""
        for mask in range(1 << len(self)):
            yield self.event_from_mask(mask)

    def singletons(self) -> list["Event"]:
        return [Event(self, frozenset([i])) for i in range(len(self))]


@dataclass(frozen=True)
class Event:
    """A subset of a world space, stored as a set of world indices."""

    space: WorldSpace
    members: frozenset[int]

    def __post_init__(self):
        n = len(self.space)
        if any(not 0 <= i < n for i in self.members):
            raise ValueError(f"event members {sorted(self.members)} outside space of size {n}")

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.members)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.labels[i] for i in sorted(self.members))

    def _check(self, other: "Event") -> None:
        if other.space != self.space:
            raise SpaceMismatch("events live on different world spaces")

    def complement(self) -> "Event":
        return Event(self.space, frozenset(range(len(self.space))) - self.members)

    def __invert__(self) -> "Event":
        return self.complement()

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.members & other.members)

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.members | other.members)

    def __sub__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.members - other.members)

    def __le__(self, other: "Event") -> bool:
        self._check(other)
        return self.members <= other.members

    def __lt__(self, other: "Event") -> bool:
        self._check(other)
        return self.members < other.members

    def __contains__(self, label: str) -> bool:
        return self.space.index(label) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def isdisjoint(self, other: "Event") -> bool:
        self._check(other)
        return self.members.isdisjoint(other.members)

    def subsets(self) -> Iterator["Event"]:
        members = sorted(self.members)
        for size in range(len(members) + 1):
            for combo in combinations(members, size):
                yield Event(self.space, frozenset(combo))

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


def _values_over(space: WorldSpace, values) -> tuple[Fraction, ...]:
    if isinstance(values, Mapping):
        unknown = set(values) - set(space.labels)
        if unknown:
            raise KeyError(f"unknown worlds {sorted(unknown)}")
        return tuple(to_fraction(values.get(label, 0)) for label in space.labels)
    values = tuple(to_fraction(v) for v in values)
    if len(values) != len(space):
        raise ValueError(f"expected {len(space)} values, got {len(values)}")
    return values


@dataclass(frozen=True)
class Measure:
    """A probability measure on a finite world space (one weight per world)."""

    space: WorldSpace
    weights: tuple[Fraction, ...]

    def __init__(self, space: WorldSpace, weights):
        if isinstance(weights, Mapping):
            missing = [label for label in space.labels if label not in weights]
            if missing:
                raise ValueError(f"measure omits worlds {missing}")
        weights = _values_over(space, weights)
        if any(w < 0 or w > 1 for w in weights):
            raise ValueError(f"measure weights must lie in [0, 1]: {weights}")
        total = sum(weights, Fraction(0))
        if total != 1:
            raise ValueError(f"measure weights sum to {total}, not 1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, space: WorldSpace) -> "Measure":
        return cls(space, [Fraction(1, len(space))] * len(space))

    @classmethod
    def point(cls, space: WorldSpace, label: str) -> "Measure":
        k = space.index(label)
        return cls(space, [Fraction(int(i == k)) for i in range(len(space))])

    def prob(self, event: Event) -> Fraction:
        if event.space != self.space:
            raise SpaceMismatch("event and measure live on different spaces")
        return sum((self.weights[i] for i in event.members), Fraction(0))

    __call__ = prob

    def __getitem__(self, label: str) -> Fraction:
        return self.weights[self.space.index(label)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.space.labels, self.weights))

    def support(self) -> Event:
        return Event(self.space, frozenset(i for i, w in enumerate(self.weights) if w))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in zip(self.space.labels, self.weights))
        return f"Measure({inner})"


def mixture(measures: Sequence[Measure], weights: Sequence[RationalLike]) -> Measure:
    """The convex combination ``sum(w_i * mu_i)``."""
    if not measures or len(measures) != len(weights):
        raise ValueError("need one weight per measure")
    space = measures[0].space
    weights = [to_fraction(w) for w in weights]
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("mixture weights must be nonnegative and sum to 1")
    cols = []
    for i in range(len(space)):
        cols.append(sum((w * m.weights[i] for w, m in zip(weights, measures)), Fraction(0)))
    return Measure(space, cols)


@dataclass(frozen=True)
class Gamble:
    """A real (rational) valued function on worlds."""

    space: WorldSpace
    values: tuple[Fraction, ...]

    def __init__(self, space: WorldSpace, values):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "values", _values_over(space, values))

    @classmethod
    def constant(cls, space: WorldSpace, c: RationalLike) -> "Gamble":
        return cls(space, [to_fraction(c)] * len(space))

    def _check(self, other: "Gamble") -> None:
        if other.space != self.space:
            raise SpaceMismatch("gambles live on different world spaces")

    def __getitem__(self, label: str) -> Fraction:
        return self.values[self.space.index(label)]

    def __add__(self, other):
        if isinstance(other, Gamble):
            return combine_gambles(1, self, 1, other)
        c = to_fraction(other)
        return Gamble(self.space, [v + c for v in self.values])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Gamble):
            return combine_gambles(1, self, -1, other)
        return self + (-to_fraction(other))

    def __neg__(self) -> "Gamble":
        return Gamble(self.space, [-v for v in self.values])

    def __mul__(self, a) -> "Gamble":
        a = to_fraction(a)
        return Gamble(self.space, [a * v for v in self.values])

    __rmul__ = __mul__

    def __le__(self, other: "Gamble") -> bool:
        """Pointwise order."""
        self._check(other)
        return all(x <= y for x, y in zip(self.values, other.values))

    def __ge__(self, other: "Gamble") -> bool:
        return other <= self

    def level_set(self, x: RationalLike) -> Event:
        """The event ``X = x``."""
        x = to_fraction(x)
        return Event(self.space, frozenset(i for i, v in enumerate(self.values) if v == x))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.space.labels, self.values))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in zip(self.space.labels, self.values))
        return f"Gamble({inner})"


def indicator(event: Event) -> Gamble:
    """The gamble that is 1 on ``event`` and 0 elsewhere."""
    return Gamble(event.space, [Fraction(int(i in event.members)) for i in range(len(event.space))])


def combine_gambles(a: RationalLike, x: Gamble, b: RationalLike, y: Gamble) -> Gamble:
    """Pointwise ``a*x + b*y``."""
    if x.space != y.space:
        raise SpaceMismatch("gambles live on different world spaces")
    a, b = to_fraction(a), to_fraction(b)
    return Gamble(x.space, [a * u + b * v for u, v in zip(x.values, y.values)])


def expectation(mu: Measure, x: Gamble) -> Fraction:
    """Expected value of ``x`` under ``mu``, summed over the distinct values of ``x``."""
    if mu.space != x.space:
        raise SpaceMismatch("measure and gamble live on different spaces")
    return sum((v * mu.prob(x.level_set(v)) for v in set(x.values)), Fraction(0))


def expectation_pointwise(mu: Measure, x: Gamble) -> Fraction:
    """``sum_w X(w) mu(w)``; equal to :func:`expectation`, kept as a cross-check."""
    if mu.space != x.space:
        raise SpaceMismatch("measure and gamble live on different spaces")
    return sum((v * w for v, w in zip(x.values, mu.weights)), Fraction(0))


def condition_measure(mu: Measure, event: Event) -> Measure:
    """``mu | event``; raises :class:`ZeroConditioningEvent` when ``mu(event) == 0``."""
    p = mu.prob(event)
    if p == 0:
        raise ZeroConditioningEvent(f"{event!r} has probability zero")
    return Measure(mu.space, [w / p if i in event.members else Fraction(0)
                              for i, w in enumerate(mu.weights)])


class SetFunction:
    """A function on the full power set of a world space.

    Values are stored in a list indexed by event bitmask, so ``len(values)``
    is ``2 ** len(space)``.
    """

    __slots__ = ("space", "values")

    def __init__(self, space: WorldSpace, values):
        self.space = space
        size = 1 << len(space)
        if isinstance(values, Mapping):
            table: list = [None] * size
            for event, v in values.items():
                if not isinstance(event, Event) or event.space != space:
                    raise SpaceMismatch("set function keys must be events on its space")
                table[event.mask] = to_fraction(v)
            missing = [space.event_from_mask(m) for m, v in enumerate(table) if v is None]
            if missing:
                raise ValueError(f"set function undefined on {missing[:3]}...")
        elif callable(values):
            table = [to_fraction(values(space.event_from_mask(m))) for m in range(size)]
        else:
            table = [to_fraction(v) for v in values]
            if len(table) != size:
                raise ValueError(f"expected {size} values, got {len(table)}")
        self.values = tuple(table)

    def __call__(self, event: Event) -> Fraction:
        if event.space != self.space:
            raise SpaceMismatch("event lives on a different space")
        return self.values[event.mask]

    __getitem__ = __call__

    def items(self) -> Iterator[tuple[Event, Fraction]]:
        for mask, v in enumerate(self.values):
            yield self.space.event_from_mask(mask), v

    def replace(self, event: Event, value: RationalLike) -> "SetFunction":
        values = list(self.values)
        values[event.mask] = to_fraction(value)
        return SetFunction(self.space, values)

    def in_unit_interval(self) -> bool:
        return all(0 <= v <= 1 for v in self.values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SetFunction) and self.space == other.space
                and self.values == other.values)

    def __hash__(self) -> int:
        return hash((self.space, self.values))

    def __repr__(self) -> str:
        body = ", ".join(f"{e!r}: {v}" for e, v in self.items())
        return f"SetFunction({body})"
