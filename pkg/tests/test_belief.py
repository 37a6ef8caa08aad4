import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from credal import CredalSet, Measure, SetFunction, WorldSpace, lower_probability, upper_probability
from credal.belief import (
    MAX_BELIEF_WORLDS,
    BeliefFunction,
    MassFunction,
    NotABelief,
    b3_violation,
    belief_from_mass,
    check_b3,
    credal_set_of_belief,
    mobius_from_belief,
    mobius_transform,
    plausibility,
    plausibility_function,
    zeta_transform,
)
from credal.credal import lower_probability_function

from helpers import random_mass, random_space

ABCD = WorldSpace("abcd")


class TestMass:
    def test_validation(self):
        with pytest.raises(ValueError, match="sum"):
            MassFunction(ABCD, {ABCD.event("a"): F(1, 2)})
        with pytest.raises(ValueError, match="empty"):
            MassFunction(ABCD, {ABCD.empty: F(1, 2), ABCD.full: F(1, 2)})
        with pytest.raises(ValueError, match="nonnegative"):
            MassFunction(ABCD, {ABCD.event("a"): F(3, 2), ABCD.full: F(-1, 2)})

    def test_focal_events(self):
        m = MassFunction(ABCD, {ABCD.event("a"): F(1, 2), ABCD.full: F(1, 2)})
        assert m.focal_events() == [ABCD.event("a"), ABCD.full]

    def test_belief_and_plausibility(self):
        m = MassFunction(ABCD, {ABCD.event("a"): F(1, 2), ABCD.event("b", "c"): F(1, 2)})
        bel = belief_from_mass(m)
        assert bel(ABCD.event("a", "b")) == F(1, 2)
        assert bel(ABCD.event("a", "b", "c")) == 1
        assert plausibility(bel, ABCD.event("b")) == F(1, 2)
        assert plausibility_function(bel)(ABCD.event("d")) == 0


class TestBeliefChecks:
    def test_b1_b2(self):
        f = SetFunction(ABCD, lambda e: F(len(e), 8))
        with pytest.raises(ValueError, match="B2"):
            mobius_from_belief(f)
        with pytest.raises(ValueError):
            BeliefFunction(SetFunction(ABCD, lambda e: F(1)))

    def test_probability_is_a_belief(self):
        mu = Measure.uniform(ABCD)
        f = SetFunction(ABCD, mu.prob)
        m = mobius_from_belief(f)
        assert m.focal_events() == ABCD.singletons()
        assert b3_violation(f) is None

    def test_two_measure_lower_probability(self):
        p = CredalSet.from_generators([Measure.uniform(ABCD),
                                       Measure(ABCD, [F(1, 2), 0, F(1, 2), 0])], hull=False)
        f = lower_probability_function(p)
        assert not check_b3(f, [ABCD.event("a", "b"), ABCD.event("b", "c")])
        with pytest.raises(NotABelief) as info:
            mobius_from_belief(f)
        assert info.value.witness == ABCD.event("a", "b", "c")
        assert info.value.masses(info.value.witness) == F(-1, 4)
        assert b3_violation(f) is not None

    def test_b3_needs_events(self):
        with pytest.raises(ValueError):
            check_b3(SetFunction(ABCD, lambda e: 0), [])

    def test_size_cap(self):
        big = WorldSpace([f"w{i}" for i in range(MAX_BELIEF_WORLDS + 1)])
        with pytest.raises(ValueError):
            mobius_transform(SetFunction(big, [0] * (1 << len(big))))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_roundtrips(seed):
    rng = random.Random(seed)
    space = random_space(rng, 1, 5)
    m = random_mass(rng, space, rng.randint(1, min(5, (1 << len(space)) - 1)))
    bel = belief_from_mass(m)
    assert mobius_from_belief(bel.values) == m
    assert zeta_transform(mobius_transform(bel.values)) == bel.values
    assert mobius_transform(zeta_transform(m.table)) == m.table


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_belief_satisfies_b3_and_envelope(seed):
    rng = random.Random(seed)
    space = random_space(rng, 2, 3)
    bel = belief_from_mass(random_mass(rng, space, rng.randint(1, (1 << len(space)) - 1)))
    assert b3_violation(bel.values) is None
    p = credal_set_of_belief(bel)
    for e in space.events():
        assert lower_probability(p, e) == bel(e)
        assert upper_probability(p, e) == plausibility(bel, e)
