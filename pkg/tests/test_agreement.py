import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgpart.agreement import (
    Agreement,
    all_agreements,
    is_covering,
    is_credible,
    is_envy_free,
    is_pareto_optimal,
    is_qualified,
    qualified_canonical_loads,
)
from scgpart.errors import CapExceeded
from scgpart.game import CostFunction
from scgpart.verify import verify_qualified_loads

ID = CostFunction.linear(12)
X, Y, Z = 0, 1, 2


def naive_pareto_optimal(a, g):
    """Straight nested-loop domination check, independent of the numpy path."""
    def costs(actions):
        lv = [actions.count(x) for x in range(a.m)]
        return [g(lv[x]) for x in actions]

    mine = costs(list(a.actions))
    for alt in itertools.product(range(a.m), repeat=a.size):
        theirs = costs(list(alt))
        if all(t <= c for t, c in zip(theirs, mine)) and theirs != mine:
            return False
    return True


class TestExampleOne:
    """Three friends, two resources, identity cost."""

    split = Agreement.anonymous((X, X, Y), 2)
    herd = Agreement.anonymous((X, X, X), 2)

    def test_covering(self):
        assert is_covering(self.split)
        assert not is_covering(self.herd)

    def test_envy(self):
        assert not is_envy_free(self.split, ID)
        assert is_envy_free(self.herd, ID)

    def test_credible(self):
        assert is_credible(self.split, ID)
        assert not is_credible(self.herd, ID)

    def test_pareto(self):
        for oracle in (False, True):
            assert is_pareto_optimal(self.split, ID, oracle=oracle)
            assert not is_pareto_optimal(self.herd, ID, oracle=oracle)

    def test_nothing_qualifies(self):
        assert not any(is_qualified(a, ID, oracle=True) for a in all_agreements(3, 2))
        assert qualified_canonical_loads(3, 2) is None


def test_small_coalition_covering():
    a = Agreement.anonymous((X, Y), 3)
    assert a.coalition_loads == (1, 1, 0)
    assert is_covering(a)
    assert is_pareto_optimal(a, ID, oracle=True)
    assert is_credible(a, CostFunction.table([1, 5, 20]))


def test_even_split_envy_free_any_g():
    a = Agreement.from_loads((2, 2, 2))
    for g in (ID, CostFunction.table([1, 3, 7, 20, 50, 90])):
        assert is_envy_free(a, g)


@pytest.mark.parametrize(
    "size,m,expected",
    [(6, 3, {(2, 2, 2)}), (2, 3, {(1, 1, 0)}), (5, 3, None), (1, 1, {(1,)})],
)
def test_qualified_canonical_loads(size, m, expected):
    got = qualified_canonical_loads(size, m)
    assert (None if got is None else set(got)) == expected


@pytest.mark.parametrize("size,m", [(s, m) for m in (1, 2, 3) for s in range(1, 7)])
def test_qualified_loads_match_brute_force(size, m):
    g = CostFunction.polynomial([0, 0, 1], size)
    assert verify_qualified_loads(size, m, g).ok


def test_pareto_cap():
    a = Agreement.from_loads((3, 3, 3))
    with pytest.raises(CapExceeded):
        is_pareto_optimal(a, ID, oracle=True, cap=100)


def test_agreement_validation():
    with pytest.raises(ValueError):
        Agreement((0, 1), (0,), 2)
    with pytest.raises(ValueError):
        Agreement((0, 0), (0, 1), 2)
    with pytest.raises(ValueError):
        Agreement((0,), (2,), 2)
    assert Agreement((4, 7), (1, 0), 2).action_of(7) == 0


convex_g = st.lists(st.integers(0, 4), min_size=5, max_size=5).map(
    lambda second: CostFunction.table(
        [Fraction(v, 3) for v in itertools.accumulate(itertools.accumulate([3] + second))]
    )
)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), convex_g, st.data())
def test_predicates_permutation_invariant(size, m, g, data):
    actions = data.draw(st.lists(st.integers(0, m - 1), min_size=size, max_size=size))
    a = Agreement.anonymous(actions, m)
    relabel = data.draw(st.permutations(range(m)))
    order = data.draw(st.permutations(range(size)))
    b = Agreement(tuple(order), tuple(relabel[actions[k]] for k in range(size)), m)
    for pred in (is_envy_free, is_credible):
        assert pred(a, g) == pred(b, g)
    assert is_covering(a) == is_covering(b)
    assert is_pareto_optimal(a, g, oracle=True) == is_pareto_optimal(b, g, oracle=True)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), convex_g, st.data())
def test_pareto_oracle_matches_naive(size, m, g, data):
    actions = data.draw(st.lists(st.integers(0, m - 1), min_size=size, max_size=size))
    a = Agreement.anonymous(actions, m)
    assert is_pareto_optimal(a, g, oracle=True) == naive_pareto_optimal(a, g)
    assert is_pareto_optimal(a, g) == naive_pareto_optimal(a, g)
