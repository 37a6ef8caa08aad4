"""Independent oracles and random generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations

from credal import CredalSet, Event, Gamble, Measure, SetFunction, WorldSpace
from credal.belief import MassFunction
from credal.linprog import EQ, GE, LE, LinearConstraint


def _det(m):
    # Leibniz expansion; fine for the tiny systems used here
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= m[i][j]
            if not term:
                break
        total += term
    return total


def _cramer(rows, rhs):
    d = _det(rows)
    if d == 0:
        return None
    out = []
    for k in range(len(rows)):
        mk = [r[:k] + [b] + r[k + 1:] for r, b in zip(rows, rhs)]
        out.append(_det(mk) / d)
    return out


def brute_vertices(space: WorldSpace, constraints) -> list[tuple]:
    """Vertices of ``{mu in the simplex : constraints}`` by support enumeration.

    For every support ``S`` and every choice of ``|S| - 1`` constraints taken
    tight, solve the square system (with ``sum = 1``) by Cramer's rule and
    keep feasible, strictly supported solutions.
    """
    n = len(space)
    found = set()
    for size in range(1, n + 1):
        for support in combinations(range(n), size):
            for tight in combinations(constraints, size - 1):
                rows = [[Fraction(1)] * size] + [[c.coefficients[i] for i in support] for c in tight]
                rhs = [Fraction(1)] + [c.rhs for c in tight]
                sol = _cramer(rows, rhs)
                if sol is None or any(v < 0 for v in sol):
                    continue
                x = [Fraction(0)] * n
                for i, v in zip(support, sol):
                    x[i] = v
                if all(c.holds(x) for c in constraints):
                    found.add(tuple(x))
    return sorted(found)


def brute_extremes(p: CredalSet, x: Gamble) -> tuple[Fraction, Fraction]:
    """``(min, max)`` of ``E_mu(x)`` by direct enumeration, no LP involved."""
    if p.generators is not None:
        points = [g.weights for g in p.generators]
    else:
        points = brute_vertices(p.space, p.constraints)
    values = [sum((a * b for a, b in zip(pt, x.values)), Fraction(0)) for pt in points]
    return min(values), max(values)


def brute_conditional_extremes(p: CredalSet, x: Gamble, given: Event):
    """Extremes of ``E(x | given)`` over vertices with ``mu(given) > 0``.

    Valid for generator sets and, for the closed hull, because the ratio is
    quasi-linear: its extremes over a polytope sit at vertices whenever the
    denominator stays positive on the whole polytope.
    """
    if p.generators is not None:
        points = [g.weights for g in p.generators]
    else:
        points = brute_vertices(p.space, p.constraints)
    values = []
    for pt in points:
        den = sum((pt[i] for i in given.members), Fraction(0))
        if den > 0:
            values.append(sum((pt[i] * x.values[i] for i in given.members), Fraction(0)) / den)
    return min(values), max(values)


# -- random objects ------------------------------------------------------------------

def random_space(rng: random.Random, low: int = 2, high: int = 4) -> WorldSpace:
    return WorldSpace([f"w{i}" for i in range(rng.randint(low, high))])


def random_measure(rng: random.Random, space: WorldSpace, scale: int = 6) -> Measure:
    raw = [rng.randint(0, scale) for _ in space]
    if not any(raw):
        raw[rng.randrange(len(raw))] = 1
    total = sum(raw)
    return Measure(space, [Fraction(r, total) for r in raw])


def random_event(rng: random.Random, space: WorldSpace, nonempty: bool = True) -> Event:
    while True:
        e = space.event_from_mask(rng.randrange(1 << len(space)))
        if e.members or not nonempty:
            return e


def random_gamble(rng: random.Random, space: WorldSpace, spread: int = 5) -> Gamble:
    return Gamble(space, [Fraction(rng.randint(-spread, spread), rng.randint(1, 3)) for _ in space])


def random_constraints(rng: random.Random, space: WorldSpace, k: int = None):
    """Constraints satisfied by a hidden random measure, so the set is nonempty."""
    anchor = random_measure(rng, space)
    n = len(space)
    out = []
    for _ in range(rng.randint(1, 3) if k is None else k):
        kind = rng.random()
        if kind < 0.7:
            e = random_event(rng, space)
            coeffs = [int(i in e.members) for i in range(n)]
            value = anchor.prob(e)
            slack = Fraction(rng.randint(0, 3), 10)
            if rng.random() < 0.5:
                out.append(LinearConstraint(coeffs, GE, max(Fraction(0), value - slack)))
            else:
                out.append(LinearConstraint(coeffs, LE, min(Fraction(1), value + slack)))
        else:
            coeffs = [rng.randint(-2, 2) for _ in range(n)]
            value = sum((c * w for c, w in zip(coeffs, anchor.weights)), Fraction(0))
            rel = rng.choice([EQ, LE, GE])
            out.append(LinearConstraint(coeffs, rel, value))
    return out


def random_credal(rng: random.Random, space: WorldSpace = None, form: str = None) -> CredalSet:
    space = space or random_space(rng)
    form = form or rng.choice(["generators", "hull", "constraints"])
    if form == "constraints":
        return CredalSet.from_constraints(space, random_constraints(rng, space))
    gens = [random_measure(rng, space) for _ in range(rng.randint(1, 4))]
    return CredalSet.from_generators(gens, hull=(form == "hull"))


def random_mass(rng: random.Random, space: WorldSpace, focal: int = None) -> MassFunction:
    masks = list(range(1, 1 << len(space)))
    chosen = rng.sample(masks, focal or rng.randint(1, 5))
    raw = [rng.randint(1, 6) for _ in chosen]
    total = sum(raw)
    values = [Fraction(0)] * (1 << len(space))
    for m, r in zip(chosen, raw):
        values[m] = Fraction(r, total)
    return MassFunction(space, SetFunction(space, values))
