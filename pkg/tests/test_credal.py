import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from credal import (
    ConditionalCredalSet,
    CredalSet,
    EmptyCredalSet,
    Interval,
    Measure,
    VacuousObservation,
    WorldSpace,
    convex_closure,
    equivalent_as_lower_expectation,
    lower_expectation,
    lower_probability,
    lower_probability_function,
    natural_extension,
    probability_interval,
    upper_expectation,
    upper_probability,
)
from credal.core import expectation, indicator
from credal.credal import constraint_on, lower_expectation_bound, upper_expectation_bound
from credal.linprog import GE, LE

from helpers import (
    brute_conditional_extremes,
    brute_extremes,
    random_credal,
    random_event,
    random_gamble,
    random_measure,
    random_space,
)

W = WorldSpace(["red", "blue", "yellow"])


def pu():
    return CredalSet.from_generators([Measure(W, [F(3, 10), 0, F(7, 10)]),
                                      Measure(W, [F(3, 10), F(7, 10), 0])])


def pu_constraints():
    return CredalSet.from_constraints(W, [constraint_on(W, {"red": 1}, "=", F(3, 10))])


class TestConstruction:
    def test_empty_generators(self):
        with pytest.raises(EmptyCredalSet):
            CredalSet.from_generators([])

    def test_infeasible_constraints(self):
        with pytest.raises(EmptyCredalSet):
            CredalSet.from_constraints(W, [constraint_on(W, {"red": 1}, GE, F(2))])

    def test_exactly_one_form(self):
        with pytest.raises(ValueError):
            CredalSet(W)

    def test_constraint_dimension(self):
        from credal.linprog import LinearConstraint
        with pytest.raises(ValueError):
            CredalSet.from_constraints(W, [LinearConstraint([1, 1], LE, 1)])

    def test_unknown_world_in_constraint(self):
        with pytest.raises(KeyError):
            constraint_on(W, {"green": 1}, LE, 1)


class TestMarbleBounds:
    @pytest.mark.parametrize("make", [pu, pu_constraints])
    def test_intervals(self, make):
        p = make()
        assert probability_interval(p, W.event("red")) == Interval(F(3, 10), F(3, 10))
        assert probability_interval(p, W.event("blue")) == Interval(0, F(7, 10))
        assert probability_interval(p, W.event("blue", "yellow")) == Interval(F(7, 10), F(7, 10))

    def test_witness_attains_bound(self):
        for p in (pu(), pu_constraints()):
            x = indicator(W.event("yellow"))
            lo, hi = lower_expectation_bound(p, x), upper_expectation_bound(p, x)
            assert expectation(lo.witness, x) == lo.value == 0
            assert expectation(hi.witness, x) == hi.value == F(7, 10)
            assert p.contains(lo.witness) and p.contains(hi.witness)

    def test_representations_give_same_vertices(self):
        assert set(convex_closure(pu()).generators) == set(pu_constraints().to_generators().generators)


class TestMembership:
    def test_hull_flag(self):
        a, b = Measure.point(W, "red"), Measure.point(W, "blue")
        mid = Measure(W, [F(1, 2), F(1, 2), 0])
        assert CredalSet.from_generators([a, b], hull=True).contains(mid)
        finite = CredalSet.from_generators([a, b], hull=False)
        assert not finite.contains(mid) and finite.hull_contains(mid)
        assert finite.contains(a)

    def test_constraint_membership(self):
        p = pu_constraints()
        assert p.contains(Measure(W, [F(3, 10), F(1, 2), F(1, 5)]))
        assert not p.contains(Measure.uniform(W))


class TestConditioning:
    def test_vacuous(self):
        p = CredalSet.from_generators([Measure.point(W, "red")])
        with pytest.raises(VacuousObservation):
            p.conditional_bound(indicator(W.event("blue")), W.event("blue", "yellow"))
        q = CredalSet.from_constraints(W, [constraint_on(W, {"red": 1}, GE, 1)])
        with pytest.raises(VacuousObservation):
            ConditionalCredalSet(q, W.event("blue"))

    def test_zero_probability_members_are_skipped(self):
        p = CredalSet.from_generators([Measure.point(W, "red"), Measure.uniform(W)], hull=False)
        b = p.conditional_bound(indicator(W.event("blue")), W.event("blue", "yellow"))
        assert b.value == F(1, 2)

    def test_hull_conditioning_uses_closure(self):
        # the hull of {red point, blue point} conditioned on {blue, yellow}: only blue survives
        p = CredalSet.from_generators([Measure.point(W, "red"), Measure.point(W, "blue")])
        x = indicator(W.event("blue"))
        assert p.conditional_bound(x, W.event("blue", "yellow"), "min").value == 1


class TestClosureAndEquivalence:
    def test_interior_generator_dropped(self):
        gens = [Measure.point(W, w) for w in W] + [Measure.uniform(W)]
        closed = convex_closure(CredalSet.from_generators(gens, hull=False))
        assert len(closed.generators) == 3 and closed.hull

    def test_p3_p4(self):
        p3 = CredalSet.from_constraints(W, [constraint_on(W, {"blue": 1}, LE, F(1, 2)),
                                            constraint_on(W, {"yellow": 1}, LE, F(1, 2))])
        p4 = CredalSet.from_constraints(W, [constraint_on(W, {"blue": 1, "yellow": -1}, "=", 0)])
        assert lower_probability_function(p3) == lower_probability_function(p4)
        assert not equivalent_as_lower_expectation(p3, p4)
        assert equivalent_as_lower_expectation(p3, convex_closure(p3))

    def test_natural_extension_contains_original(self):
        p = pu()
        ext = natural_extension(lower_probability_function(p))
        assert all(ext.contains(v) for v in p.vertices())
        assert lower_probability_function(ext) == lower_probability_function(p)

    def test_interval_helpers(self):
        wide, narrow = Interval(0, F(1, 2)), Interval(F(1, 3), F(1, 3))
        assert wide.strictly_contains(narrow) and not narrow.strictly_contains(wide)
        assert not wide.strictly_contains(wide)
        assert str(wide) == "[0, 1/2]" and F(1, 4) in wide and wide.width == F(1, 2)
        with pytest.raises(ValueError):
            Interval(1, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_bounds_match_brute_force(seed):
    rng = random.Random(seed)
    p = random_credal(rng)
    x = random_gamble(rng, p.space)
    assert (lower_expectation(p, x), upper_expectation(p, x)) == brute_extremes(p, x)
    b = lower_expectation_bound(p, x)
    assert expectation(b.witness, x) == b.value and p.hull_contains(b.witness)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_representation_invariance(seed):
    rng = random.Random(seed)
    p = random_credal(rng, form="constraints")
    q = p.to_generators()
    x = random_gamble(rng, p.space)
    assert lower_expectation(p, x) == lower_expectation(q, x)
    assert upper_expectation(p, x) == upper_expectation(q, x)
    e = random_event(rng, p.space)
    if all(v.prob(e) > 0 for v in q.generators):
        for sense in ("min", "max"):
            assert p.conditional_bound(x, e, sense).value == q.conditional_bound(x, e, sense).value


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_conditional_bounds_match_vertices(seed):
    rng = random.Random(seed)
    p = random_credal(rng)
    e = random_event(rng, p.space)
    x = random_gamble(rng, p.space)
    points = p.generators if p.generators is not None else p.to_generators().generators
    if not all(g.prob(e) > 0 for g in points):
        return
    lo = p.conditional_bound(x, e, "min").value
    hi = p.conditional_bound(x, e, "max").value
    assert (lo, hi) == brute_conditional_extremes(p, x, e)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_lower_upper_conjugacy_and_order(seed):
    rng = random.Random(seed)
    p = random_credal(rng)
    for e in p.space.events():
        lo, hi = lower_probability(p, e), upper_probability(p, e)
        assert 0 <= lo <= hi <= 1
        assert lo == 1 - upper_probability(p, ~e)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_closure_invariance(seed):
    rng = random.Random(seed)
    space = random_space(rng)
    gens = [random_measure(rng, space) for _ in range(rng.randint(1, 5))]
    finite = CredalSet.from_generators(gens, hull=False)
    x = random_gamble(rng, space)
    assert lower_expectation(finite, x) == lower_expectation(convex_closure(finite), x)
    assert equivalent_as_lower_expectation(finite, CredalSet.from_generators(gens, hull=True))
