"""Acts, utilities and the four preference orders induced by a credal set.

Rule 1 compares lower expected utilities, rule 2 upper ones, rule 3 asks
that the worst case of one act beat the best case of the other, and rule 4
asks for at least as high an expected utility under every member.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .core import (
    CredalError,
    Gamble,
    Measure,
    WorldSpace,
    combine_gambles,
    expectation,
    to_fraction,
)
from .credal import CredalSet, lower_expectation, upper_expectation
from .linprog import EQ, LE, LinearConstraint, LinearProgram, solve_lp

RULES = (1, 2, 3, 4)


class MissingUtility(CredalError, KeyError):
    """An act produces a consequence with no utility assigned."""


@dataclass(frozen=True)
class Act:
    """A named function from worlds to consequence labels."""

    space: WorldSpace
    name: str
    outcomes: tuple[str, ...]

    def __init__(self, space: WorldSpace, name: str, outcomes):
        if isinstance(outcomes, Mapping):
            missing = [w for w in space.labels if w not in outcomes]
            if missing:
                raise ValueError(f"act {name!r} has no consequence for worlds {missing}")
            unknown = set(outcomes) - set(space.labels)
            if unknown:
                raise KeyError(f"act {name!r} names unknown worlds {sorted(unknown)}")
            outcomes = [outcomes[w] for w in space.labels]
        outcomes = tuple(str(o) for o in outcomes)
        if len(outcomes) != len(space):
            raise ValueError(f"act {name!r} must give one consequence per world")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def consequences(self) -> set[str]:
        return set(self.outcomes)


class UtilityTable(dict):
    """Consequence label -> rational utility."""

    def __init__(self, utilities: Mapping = ()):
        super().__init__({str(k): to_fraction(v) for k, v in dict(utilities).items()})

    def __missing__(self, key):
        raise MissingUtility(f"no utility for consequence {key!r}")


def utility_gamble(act: Act, u: Mapping) -> Gamble:
    """``w -> u(act(w))``."""
    if not isinstance(u, UtilityTable):
        u = UtilityTable(u)
    return Gamble(act.space, [u[o] for o in act.outcomes])


def compare(p: CredalSet, a1: Act, a2: Act, u: Mapping, rule: int) -> tuple[bool, bool]:
    """``(a1 >= a2, a2 >= a1)`` under the given rule."""
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}")
    x, y = utility_gamble(a1, u), utility_gamble(a2, u)
    if rule == 1:
        lx, ly = lower_expectation(p, x), lower_expectation(p, y)
        return lx >= ly, ly >= lx
    if rule == 2:
        ux, uy = upper_expectation(p, x), upper_expectation(p, y)
        return ux >= uy, uy >= ux
    if rule == 3:
        return (lower_expectation(p, x) >= upper_expectation(p, y),
                lower_expectation(p, y) >= upper_expectation(p, x))
    diff = combine_gambles(1, x, -1, y)
    return lower_expectation(p, diff) >= 0, lower_expectation(p, -diff) >= 0


PREFERS = "prefers"
PREFERRED_BY = "preferred-by"
INDIFFERENT = "indifferent"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class PreferenceMatrix:
    rule: int
    acts: tuple[str, ...]
    relation: tuple[tuple[bool, ...], ...]
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]

    def weakly_prefers(self, a: str, b: str) -> bool:
        return self.relation[self.acts.index(a)][self.acts.index(b)]

    def strictly_prefers(self, a: str, b: str) -> bool:
        return self.weakly_prefers(a, b) and not self.weakly_prefers(b, a)

    def classify(self, a: str, b: str) -> str:
        ab, ba = self.weakly_prefers(a, b), self.weakly_prefers(b, a)
        if ab and ba:
            return INDIFFERENT
        if ab:
            return PREFERS
        if ba:
            return PREFERRED_BY
        return INCOMPARABLE

    def maximal(self) -> list[str]:
        """Acts not strictly beaten by any other act."""
        return [a for a in self.acts if not any(self.strictly_prefers(b, a) for b in self.acts)]


def preference_matrix(p: CredalSet, acts: Sequence[Act], u: Mapping, rule: int
                      ) -> PreferenceMatrix:
    if not acts:
        raise ValueError("need at least one act")
    n = len(acts)
    rel = [[True] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rel[i][j], rel[j][i] = compare(p, acts[i], acts[j], u, rule)
    gambles = [utility_gamble(a, u) for a in acts]
    return PreferenceMatrix(
        rule,
        tuple(a.name for a in acts),
        tuple(tuple(row) for row in rel),
        tuple(lower_expectation(p, g) for g in gambles),
        tuple(upper_expectation(p, g) for g in gambles),
    )


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Multipliers ``y >= 0`` summing to 1 with ``sum y_i X_i <= 0`` at every world.

    Such ``y`` rules out any measure giving every ``X_i`` a strictly positive
    expectation.  ``margin`` is the best achievable ``min_i E_mu(X_i)``.
    """

    multipliers: tuple[Fraction, ...]
    combination: Gamble
    margin: Fraction

    def verify(self) -> bool:
        return (all(y >= 0 for y in self.multipliers) and sum(self.multipliers) == 1
                and all(v <= 0 for v in self.combination.values))


def strict_preference_certificate(gambles: Sequence[Gamble]) -> Optional[InfeasibilityCertificate]:
    """Certificate that no single measure makes every gamble's expectation positive.

    Returns ``None`` when such a measure exists.
    """
    space = gambles[0].space
    n, k = len(space), len(gambles)
    # primal: max t  s.t. E_mu(X_i) >= t, mu in the simplex  (t free)
    cons = [LinearConstraint([*g.values, -1], ">=", 0) for g in gambles]
    cons.append(LinearConstraint([1] * n + [0], EQ, 1))
    primal = solve_lp(LinearProgram([0] * n + [1], cons, "max", free={n}))
    if primal.value > 0:
        return None
    # alternative system: min s  s.t. sum_i y_i X_i(w) <= s for all w, y in the simplex
    cons = [LinearConstraint([g.values[w] for g in gambles] + [-1], LE, 0) for w in range(n)]
    cons.append(LinearConstraint([1] * k + [0], EQ, 1))
    dual = solve_lp(LinearProgram([0] * k + [1], cons, "min", free={k}))
    y = dual.witness[:k]
    combo = Gamble.constant(space, 0)
    for yi, g in zip(y, gambles):
        combo = combine_gambles(1, combo, yi, g)
    cert = InfeasibilityCertificate(tuple(y), combo, primal.value)
    assert cert.verify()
    return cert


def expected_utilities(measures: Sequence[Measure], act: Act, u: Mapping) -> list[Fraction]:
    g = utility_gamble(act, u)
    return [expectation(m, g) for m in measures]
