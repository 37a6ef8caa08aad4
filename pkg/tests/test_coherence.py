import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from credal import CredalSet, SetFunction, WorldSpace, lower_probability_function
from credal.coherence import (
    COHERENT,
    INCOHERENT,
    NOT_NORMALIZED,
    check_cover_inequality,
    conjugate,
    enumerate_covers,
    indicator_bounds,
    is_coherent_lower_probability,
    mixed_bound_violation,
    recover_largest_credal_set,
    satisfies_cover_property,
    superadditivity_violation,
    verify_cover,
)

from helpers import random_credal, random_space

ABC = WorldSpace(["a", "b", "c"])


def vacuous(space):
    return SetFunction(space, lambda e: F(int(e == space.full)))


class TestCovers:
    def test_partition_is_a_cover(self):
        a, b = ABC.event("a"), ABC.event("b")
        cover = verify_cover([a, b], a | b)
        assert (cover.m, cover.n) == (0, 1)

    def test_pairs_cover_everything_twice(self):
        coll = [ABC.event("a", "b"), ABC.event("b", "c"), ABC.event("a", "c")]
        cover = verify_cover(coll, ABC.full)
        assert (cover.m, cover.n) == (2, 0)

    def test_uneven_is_not_a_cover(self):
        assert verify_cover([ABC.event("a", "b"), ABC.event("b", "c")], ABC.event("a", "b", "c")) is None

    def test_complement_covered_more_is_rejected(self):
        assert verify_cover([ABC.event("b", "c")], ABC.event("a")) is None

    def test_enumerated_covers_verify(self):
        covers = list(enumerate_covers(ABC, max_k=3))
        assert covers
        for c in covers:
            again = verify_cover(c.collection, c.target)
            assert again is not None and (again.m + again.n, again.m) == (c.m + c.n, c.m) \
                or c.n == 0

    def test_cap(self):
        with pytest.raises(ValueError):
            list(enumerate_covers(WorldSpace("abcde")))

    def test_inequality(self):
        f = vacuous(ABC)
        cover = verify_cover([ABC.event("a"), ABC.event("b", "c")], ABC.full)
        assert check_cover_inequality(f, cover)
        bad = f.replace(ABC.event("a"), F(1, 2)).replace(ABC.event("b", "c"), F(2, 3))
        assert not check_cover_inequality(bad, cover)


class TestVerdicts:
    def test_vacuous_is_coherent(self):
        assert is_coherent_lower_probability(vacuous(ABC)).status == COHERENT

    def test_not_normalized(self):
        f = vacuous(ABC).replace(ABC.full, F(1, 2))
        assert is_coherent_lower_probability(f).status == NOT_NORMALIZED

    def test_empty_natural_extension(self):
        f = vacuous(ABC).replace(ABC.event("a"), F(2, 3)).replace(ABC.event("b", "c"), F(2, 3))
        v = is_coherent_lower_probability(f)
        assert v.status == INCOHERENT and v.witness is None

    def test_unattained_value(self):
        # f({a,b}) = 0 is below what f({a}) + f({b}) force
        f = vacuous(ABC).replace(ABC.event("a"), F(1, 3)).replace(ABC.event("b"), F(1, 3))
        v = is_coherent_lower_probability(f)
        assert v.status == INCOHERENT and v.witness == ABC.event("a", "b")
        assert v.attained == F(2, 3)

    def test_raising_a_value_can_keep_coherence(self):
        # the vacuous set with f({a,b}) raised to 1/2 is the lower probability of {mu(c) <= 1/2}
        f = vacuous(ABC).replace(ABC.event("a", "b"), F(1, 2))
        assert is_coherent_lower_probability(f).coherent

    def test_two_world_vacuous_cannot_be_broken_by_one_proper_raise(self):
        space = WorldSpace("ab")
        for value in (F(1, 3), F(1, 2), F(1)):
            f = vacuous(space).replace(space.event("a"), value)
            assert is_coherent_lower_probability(f).coherent

    def test_recover_largest_set(self):
        p = CredalSet.from_generators([CredalSet.simplex(ABC).vertices()[0]], hull=False)
        f = lower_probability_function(p)
        q = recover_largest_credal_set(indicator_bounds(f))
        assert lower_probability_function(q) == f


class TestMixedBounds:
    def test_conjugate_is_involution(self):
        f = lower_probability_function(CredalSet.simplex(ABC))
        assert conjugate(conjugate(f)) == f

    def test_grid_search_finds_no_function_separating_the_two(self):
        # with both the lower and the upper additivity conditions, the mixed bound follows
        grid = [F(0), F(1, 3), F(1, 2), F(2, 3), F(1)]
        passed = 0
        for vals in product(grid, repeat=6):
            f = SetFunction(ABC, [0, *vals, 1])
            if superadditivity_violation(f) is None:
                passed += 1
                assert mixed_bound_violation(f) is None
        assert passed == 202

    def test_lower_superadditivity_alone_does_not_give_the_mixed_bound(self):
        values = [0, 0, 0, 0, 0, F(1, 3), 1, 1]  # f({a,c}) = 1/3, f({b,c}) = 1
        f = SetFunction(ABC, values)
        lo = f.values
        assert all(lo[u | v] >= lo[u] + lo[v] for u in range(8) for v in range(8) if not u & v)
        assert mixed_bound_violation(f) == (ABC.event("c"), ABC.event("a"))
        assert superadditivity_violation(f) is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_lower_probabilities_pass_every_check(seed):
    rng = random.Random(seed)
    p = random_credal(rng, random_space(rng, 2, 3))
    f = lower_probability_function(p)
    assert superadditivity_violation(f) is None
    assert mixed_bound_violation(f) is None
    assert satisfies_cover_property(f, 4) is None
    assert is_coherent_lower_probability(f).coherent


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_cover_violation_implies_incoherent(seed):
    rng = random.Random(seed)
    space = random_space(rng, 2, 3)
    f = lower_probability_function(random_credal(rng, space))
    e = space.event_from_mask(rng.randrange(1, (1 << len(space)) - 1))
    g = f.replace(e, min(F(1), f(e) + F(rng.randint(1, 6), 6)))
    if satisfies_cover_property(g, 4) is not None:
        assert not is_coherent_lower_probability(g).coherent
    if is_coherent_lower_probability(g).coherent:
        assert satisfies_cover_property(g, 4) is None
