"""Conditioning credal sets, q-updating, learning runs and the worked scenarios."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Optional, Sequence, Union

from .core import (
    Event,
    Measure,
    RationalLike,
    WorldSpace,
    ZeroConditioningEvent,
    condition_measure,
    to_fraction,
)
from .credal import (
    AnyCredal,
    ConditionalCredalSet,
    CredalSet,
    Interval,
    VacuousObservation,
    probability_interval,
    simplex_constraint,
    upper_probability,
)
from .linprog import GE, LinearConstraint, enumerate_vertices

MAX_EXPLICIT_TOSSES = 12


@dataclass(frozen=True)
class UpdatePolicy:
    """Plain conditioning (``q is None``) or q-conditioning with ``0 < q <= 1``."""

    q: Optional[Fraction] = None

    def __post_init__(self):
        if self.q is not None:
            q = to_fraction(self.q)
            if not 0 < q <= 1:
                raise ValueError(f"q must lie in (0, 1], got {q}")
            object.__setattr__(self, "q", q)

    @classmethod
    def bayes(cls) -> "UpdatePolicy":
        return cls(None)

    @classmethod
    def likelihood(cls, q: RationalLike) -> "UpdatePolicy":
        return cls(to_fraction(q))

    @property
    def is_bayes(self) -> bool:
        return self.q is None

    def __str__(self) -> str:
        return "bayes" if self.q is None else f"q={self.q}"


BAYES = UpdatePolicy()


def condition_credal(p: CredalSet, event: Event) -> Union[CredalSet, ConditionalCredalSet]:
    """``{mu|U : mu in P, mu(U) > 0}``.

    Generator sets are conditioned generator by generator (the hull flag is
    kept, since conditioning maps the hull of the generators onto the hull of
    the conditioned generators).  Constraint sets are conditioned lazily.
    """
    if p.generators is None:
        return ConditionalCredalSet(p, event)
    live = [g for g in p.generators if g.prob(event) > 0]
    if not live:
        raise VacuousObservation(f"every member gives {event!r} probability zero")
    conditioned = dict.fromkeys(condition_measure(g, event) for g in live)
    return CredalSet.from_generators(conditioned, hull=p.hull)


def likelihood_filter(p: CredalSet, event: Event, q: RationalLike) -> CredalSet:
    """``{mu in P : mu(U) >= q P^*(U)}`` (before conditioning)."""
    q = to_fraction(q)
    if not 0 < q <= 1:
        raise ValueError(f"q must lie in (0, 1], got {q}")
    top = upper_probability(p, event)
    if top == 0:
        raise VacuousObservation(f"every member gives {event!r} probability zero")
    threshold = q * top
    if p.generators is None:
        extra = LinearConstraint([int(i in event.members) for i in range(len(p.space))],
                                 GE, threshold)
        return CredalSet.from_constraints(p.space, (*p.constraints, extra))
    if not p.hull:
        return CredalSet.from_generators([g for g in p.generators if g.prob(event) >= threshold],
                                         hull=False)
    # cut the mixture-weight simplex and map its vertices back to measures
    k = len(p.generators)
    cut = LinearConstraint([g.prob(event) for g in p.generators], GE, threshold)
    weights = enumerate_vertices([simplex_constraint(k), cut], k)
    measures = dict.fromkeys(p._mix(w) for w in weights)
    return CredalSet.from_generators(measures, hull=True)


def q_condition_credal(p: CredalSet, event: Event, q: RationalLike
                       ) -> Union[CredalSet, ConditionalCredalSet]:
    """``{mu|U : mu in P, q P^*(U) <= mu(U)}``; ``q = 1`` keeps only the most likely members."""
    return condition_credal(likelihood_filter(p, event, q), event)


def update(p: CredalSet, event: Event, policy: UpdatePolicy
           ) -> Union[CredalSet, ConditionalCredalSet]:
    if policy.is_bayes:
        return condition_credal(p, event)
    return q_condition_credal(p, event, policy.q)


@dataclass(frozen=True)
class LearningStep:
    observation: object
    surviving: AnyCredal
    prediction: Optional[Interval]
    parameters: Optional[tuple[Fraction, ...]] = None


@dataclass
class LearningTrace:
    policy: UpdatePolicy
    steps: list[LearningStep] = field(default_factory=list)

    @property
    def final(self) -> LearningStep:
        return self.steps[-1]


def sequential_learn(p0: CredalSet, observations: Sequence[Event], policy: UpdatePolicy = BAYES,
                     predict: Optional[Event] = None) -> LearningTrace:
    """Update ``p0`` on each prefix of ``observations``.

    Step ``i`` holds ``p0`` updated on the intersection of the first ``i``
    observations.  For plain conditioning this is the same as conditioning
    step by step; for q-updating the likelihood threshold is taken against
    the whole evidence so far, which is what lets the set shrink.
    """
    trace = LearningTrace(policy)
    evidence = p0.space.full
    for step, obs in enumerate(observations, 1):
        evidence = evidence & obs
        try:
            surviving = update(p0, evidence, policy)
        except VacuousObservation as exc:
            raise VacuousObservation(f"step {step}: {exc}") from exc
        interval = probability_interval(surviving, predict) if predict is not None else None
        trace.steps.append(LearningStep(obs, surviving, interval))
    return trace


# -- coin tossing -------------------------------------------------------------

TOSS_SPACE = WorldSpace(["h", "t"])


def toss_measure(bias: RationalLike) -> Measure:
    bias = to_fraction(bias)
    return Measure(TOSS_SPACE, [bias, 1 - bias])


def bias_grid(start: RationalLike, stop: RationalLike, step: RationalLike) -> list[Fraction]:
    """``start, start+step, ...`` up to and including ``stop``."""
    start, stop, step = to_fraction(start), to_fraction(stop), to_fraction(step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    out, x = [], start
    while x <= stop:
        out.append(x)
        x += step
    return out


def _normalize_toss(t) -> str:
    t = str(t).upper()
    if t not in ("H", "T"):
        raise ValueError(f"toss outcome must be H or T, got {t!r}")
    return t


def sequence_likelihood(bias: Fraction, heads: int, tails: int) -> Fraction:
    return bias ** heads * (1 - bias) ** tails


def learn_coin(biases: Sequence[RationalLike], tosses: Sequence[str],
               policy: UpdatePolicy = BAYES) -> LearningTrace:
    """Learn about an i.i.d. coin whose bias is one of ``biases``.

    Works directly with Bernoulli likelihoods, so sequences far longer
    than an explicit ``2**n`` world table are handled exactly.  Each step
    records the surviving biases, the credal set of next-toss predictions
    (over ``{h, t}``) and the interval for heads on the next toss.
    """
    biases = sorted(dict.fromkeys(to_fraction(b) for b in biases))
    if not biases or any(not 0 <= b <= 1 for b in biases):
        raise ValueError("biases must be a nonempty list in [0, 1]")
    # unreduced integer likelihoods num/den per bias; avoids gcd work on huge fractions
    num = {b: 1 for b in biases}
    den = {b: 1 for b in biases}
    trace = LearningTrace(policy)
    for step, t in enumerate(tosses, 1):
        t = _normalize_toss(t)
        for b in biases:
            num[b] *= b.numerator if t == "H" else b.denominator - b.numerator
            den[b] *= b.denominator
        best = biases[0]
        for b in biases[1:]:
            if num[b] * den[best] > num[best] * den[b]:
                best = b
        if num[best] == 0:
            raise VacuousObservation(f"step {step}: every bias gives the sequence probability zero")
        if policy.is_bayes:
            alive = [b for b in biases if num[b] > 0]
        else:
            q = policy.q
            # num_b/den_b >= q * num_best/den_best, cross-multiplied
            alive = [b for b in biases
                     if num[b] * den[best] * q.denominator >= q.numerator * num[best] * den[b]]
        surviving = CredalSet.from_generators([toss_measure(b) for b in alive], hull=False)
        trace.steps.append(LearningStep(t, surviving, Interval(alive[0], alive[-1]), tuple(alive)))
    return trace


def survivors_by_likelihood_ratio(biases: Sequence[RationalLike], heads: int, tails: int,
                                  q: Optional[RationalLike] = None) -> list[Fraction]:
    """Biases kept after ``heads`` heads and ``tails`` tails, from closed-form likelihoods.

    A bias survives when its likelihood is at least ``q`` times the best one
    (``q=None``: when its likelihood is positive).  Only the counts matter,
    so this serves as an order-free check on :func:`learn_coin`.
    """
    biases = sorted(dict.fromkeys(to_fraction(b) for b in biases))
    like = {b: sequence_likelihood(b, heads, tails) for b in biases}
    if q is None:
        return [b for b in biases if like[b] > 0]
    best = max(like.values())
    return [b for b in biases if like[b] >= to_fraction(q) * best]


def simulate_tosses(bias: RationalLike, n: int, seed: int) -> str:
    """``n`` i.i.d. tosses of a coin with the given bias, reproducible from ``seed``."""
    bias = to_fraction(bias)
    rng = random.Random(seed)
    # compare against an exact rational threshold on a 53-bit uniform
    return "".join("H" if Fraction(rng.getrandbits(53), 1 << 53) < bias else "T"
                   for _ in range(n))


class Scenario(NamedTuple):
    space: WorldSpace
    credal: CredalSet
    events: dict


def coin_space(n: int) -> WorldSpace:
    if not 1 <= n <= MAX_EXPLICIT_TOSSES:
        raise ValueError(f"explicit coin spaces need 1 <= n <= {MAX_EXPLICIT_TOSSES}")
    return WorldSpace("".join(w) for w in product("ht", repeat=n))


def product_measure(space: WorldSpace, bias: RationalLike) -> Measure:
    bias = to_fraction(bias)
    return Measure(space, [bias ** w.count("h") * (1 - bias) ** w.count("t") for w in space])


def build_coin_scenario(biases: Sequence[RationalLike], tosses: int) -> Scenario:
    """``n`` i.i.d. tosses for each bias; a finite (non-convex) generator set.

    Events ``H1..Hn`` and ``T1..Tn`` are the cylinder sets for each toss.
    """
    space = coin_space(tosses)
    measures = dict.fromkeys(product_measure(space, b) for b in biases)
    events = {}
    for i in range(tosses):
        events[f"H{i + 1}"] = Event(space, frozenset(k for k, w in enumerate(space) if w[i] == "h"))
        events[f"T{i + 1}"] = Event(space, frozenset(k for k, w in enumerate(space) if w[i] == "t"))
    return Scenario(space, CredalSet.from_generators(measures, hull=False), events)


class CoinPosterior(NamedTuple):
    next_heads: Fraction
    bias_b: Fraction


def bayesian_coin_posterior(p: RationalLike, a: RationalLike, b: RationalLike) -> CoinPosterior:
    """Second-order version of the two-coin problem.

    A single measure on ``{bias a, bias b} x {hh, ht, th, tt}`` gives bias
    ``a`` prior probability ``p``.  Returns ``mu(H2 | H1)`` and
    ``mu(bias b | H1)``, both computed by conditioning that measure.
    """
    p, a, b = to_fraction(p), to_fraction(a), to_fraction(b)
    if not all(0 <= v <= 1 for v in (p, a, b)):
        raise ValueError("p, a and b must lie in [0, 1]")
    pairs = ["hh", "ht", "th", "tt"]
    space = WorldSpace([f"{c}:{w}" for c in ("a", "b") for w in pairs])
    weights = []
    for coin, prior, bias in (("a", p, a), ("b", 1 - p, b)):
        for w in pairs:
            weights.append(prior * bias ** w.count("h") * (1 - bias) ** w.count("t"))
    mu = Measure(space, weights)
    h1 = Event(space, frozenset(i for i, w in enumerate(space) if w[2] == "h"))
    h2 = Event(space, frozenset(i for i, w in enumerate(space) if w[3] == "h"))
    cb = Event(space, frozenset(i for i, w in enumerate(space) if w[0] == "b"))
    try:
        post = condition_measure(mu, h1)
    except ZeroConditioningEvent as exc:
        raise ZeroConditioningEvent("p*a + (1-p)*b is zero: heads is impossible") from exc
    return CoinPosterior(post.prob(h2), post.prob(cb))


# -- three prisoners ----------------------------------------------------------

PRISONER_WORLDS = ("ab", "ac", "bc", "cb")


def prisoners_space() -> WorldSpace:
    """Worlds ``xy``: prisoner ``x`` is pardoned and the jailer names ``y``."""
    return WorldSpace(PRISONER_WORLDS)


def prisoners_events(space: WorldSpace) -> dict[str, Event]:
    return {
        "lives-a": space.event("ab", "ac"),
        "lives-b": space.event("bc"),
        "lives-c": space.event("cb"),
        "says-b": space.event("ab", "cb"),
        "says-c": space.event("ac", "bc"),
    }


def prisoners_measure(alpha: RationalLike, space: Optional[WorldSpace] = None) -> Measure:
    """Jailer names ``b`` with probability ``alpha`` when ``a`` is pardoned."""
    alpha = to_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    third = Fraction(1, 3)
    return Measure(space or prisoners_space(), [alpha * third, (1 - alpha) * third, third, third])


def build_three_prisoners() -> Scenario:
    """The segment ``{mu_alpha : alpha in [0, 1]}`` as the hull of its endpoints."""
    space = prisoners_space()
    credal = CredalSet.from_generators([prisoners_measure(0, space), prisoners_measure(1, space)],
                                       hull=True)
    return Scenario(space, credal, prisoners_events(space))


# -- dilation -------------------------------------------------------------------

@dataclass(frozen=True)
class DilationReport:
    prior: Interval
    conditionals: tuple[tuple[Event, Interval], ...]

    @property
    def dilates(self) -> bool:
        """Every cell's conditional interval strictly contains the unconditional one."""
        return all(iv.strictly_contains(self.prior) for _, iv in self.conditionals)


def dilation_report(p: CredalSet, target: Event, partition: Sequence[Event]) -> DilationReport:
    space = p.space
    if not partition:
        raise ValueError("partition must be nonempty")
    union = space.empty
    for cell in partition:
        if not cell.isdisjoint(union):
            raise ValueError("partition cells overlap")
        union = union | cell
    if union != space.full:
        raise ValueError("partition does not cover the world space")
    rows = []
    for cell in partition:
        if upper_probability(p, cell) == 0:
            raise ValueError(f"partition cell {cell!r} has upper probability zero")
        rows.append((cell, probability_interval(condition_credal(p, cell), target)))
    return DilationReport(probability_interval(p, target), tuple(rows))
