import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgpart.agreement import Agreement
from scgpart.errors import CapExceeded
from scgpart.game import CostFunction, InvalidCostFunction
from scgpart.partition import Partition
from scgpart.verify import standard_costs
from scgpart.weighted import (
    MnpObjective,
    WeightedGame,
    base_weights,
    find_hat_c_optimal_partition,
    is_single_unequal_coalition,
    mnp_solve,
    objective_value,
    render_agreement,
    weighted_c_bar_equivalence_check,
    weighted_is_credible,
    weighted_is_envy_free,
    weighted_is_pareto_optimal,
    weighted_is_qualified,
    weighted_loads,
    weighted_max_cost,
    weighted_qualified_conditions,
    weighted_total_cost,
)

ID = CostFunction.linear(30)
EXAMPLE = (5, 3, 2, 2, 1)


def outcome_for(groups):
    """Player-level outcome putting the listed weight indices on resources 0, 1, ..."""
    n = sum(len(g) for g in groups)
    out = [0] * n
    for x, g in enumerate(groups):
        for i in g:
            out[i] = x
    return tuple(out)


class TestCosts:
    game = WeightedGame(EXAMPLE, 4, CostFunction.linear(13))

    def test_minimax_outcome(self):
        o = outcome_for([[0], [1, 4], [2], [3]])
        assert weighted_loads(o, EXAMPLE, 4) == (5, 4, 2, 2)
        assert weighted_total_cost(self.game, o) == 49

    def test_min_var_outcome(self):
        o = outcome_for([[0], [1], [2, 4], [3]])
        assert weighted_total_cost(self.game, o) == 47
        assert weighted_max_cost(self.game, o) == 5

    def test_single_player(self):
        g = WeightedGame((4,), 2, CostFunction.polynomial([0, 0, 1], 4))
        assert weighted_total_cost(g, (1,)) == 4 * 16
        assert weighted_max_cost(g, (1,)) == 16

    def test_validation(self):
        with pytest.raises(ValueError):
            WeightedGame((0, 1), 2, ID)
        with pytest.raises(InvalidCostFunction):
            WeightedGame((20, 20), 2, ID)


class TestPredicates:
    def test_counter_example_agreement(self):
        ws = (1, 2, 3)
        a = Agreement.anonymous((0, 0, 1), 2)
        assert weighted_is_credible(a, ws, ID)
        assert not weighted_is_envy_free(a, ws)
        assert base_weights(a, ws) == {0: 2, 1: 1, 2: 0}
        assert render_agreement(a, ws) == "[3|21]"

    def test_herd_not_credible(self):
        assert not weighted_is_credible(Agreement.anonymous((0, 0), 2), (2, 2), ID)

    def test_distinct_resources(self):
        ws = (3, 1, 2)
        a = Agreement.anonymous((2, 0, 1), 3)
        assert weighted_is_credible(a, ws, ID)
        assert not weighted_is_envy_free(Agreement.anonymous((0, 0, 1), 3), (1, 1, 1))
        assert weighted_is_envy_free(Agreement.anonymous((0, 1, 2), 3), (2, 2, 2))

    def test_equal_base_weight(self):
        a = Agreement.anonymous((0, 0, 1, 1), 2)
        assert weighted_is_envy_free(a, (2, 2, 2, 2))
        assert weighted_is_qualified(a, (2, 2, 2, 2), ID, oracle=True)


class TestStructure:
    def test_b_two(self):
        s = weighted_qualified_conditions((2, 2, 2, 2), 2)
        assert s.b == 2 and s.groups == ((2, 2, 2),)
        assert s.loads(2) == (4, 4)

    def test_infeasible(self):
        assert weighted_qualified_conditions((1, 2, 3), 2) is None

    def test_small(self):
        s = weighted_qualified_conditions((1, 2), 3)
        assert s.all_distinct and s.loads(3) == (2, 1, 0)

    def test_single_resource(self):
        assert weighted_qualified_conditions((1, 2), 1).loads(1) == (3,)


def multisets(max_total):
    for n in range(1, 7):
        for ws in itertools.combinations_with_replacement(range(1, 6), n):
            if sum(ws) <= max_total:
                yield ws


@pytest.mark.parametrize("m", [1, 2, 3])
def test_structure_matches_brute_force(m):
    """Qualified loads, found exhaustively, equal the closed-form structure."""
    for ws in multisets(12):
        if m ** len(ws) > 3**6:
            continue
        s = weighted_qualified_conditions(ws, m)
        expected = set() if s is None else {s.loads(m)}
        for f in standard_costs(sum(ws)).values():
            found = {
                tuple(sorted(weighted_loads(acts, ws, m), reverse=True))
                for acts in itertools.product(range(m), repeat=len(ws))
                if weighted_is_qualified(Agreement.anonymous(acts, m), ws, f, oracle=True)
            }
            assert found == expected, (ws, m)


@pytest.mark.parametrize("m", [2, 3])
def test_weighted_lattice(m):
    """Covering equals Pareto, and credible implies covering, for weighted coalitions."""
    for ws in multisets(10):
        if len(ws) > 5:
            continue
        for f in standard_costs(sum(ws)).values():
            for acts in itertools.product(range(m), repeat=len(ws)):
                a = Agreement.anonymous(acts, m)
                po = weighted_is_pareto_optimal(a, ws, f, oracle=True)
                assert po == weighted_is_pareto_optimal(a, ws, f)
                if weighted_is_credible(a, ws, f):
                    assert po


class TestMnp:
    @pytest.mark.parametrize(
        "obj,value", [("minimax", 5), ("maximin", 2), ("min_gap", 3)]
    )
    def test_named_outcomes_tie(self, obj, value):
        sol = mnp_solve(EXAMPLE, 4, obj)
        assert sol.value == value
        assert {(5, 4, 2, 2), (5, 3, 3, 2)} <= set(sol.argmin)

    def test_min_var_unique(self):
        sol = mnp_solve(EXAMPLE, 4, MnpObjective.MIN_VAR)
        assert sol.argmin == ((5, 3, 3, 2),)
        assert sorted(sol.loads, reverse=True) == [5, 3, 3, 2]
        assert sol.value == 47

    def test_small(self):
        sol = mnp_solve((1, 2, 3), 2, "minimax")
        assert sol.value == 3 and sol.argmin == ((3, 3),)
        assert mnp_solve((4,), 1, "minimax").loads == (4,)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            mnp_solve((1,) * 10, 3, "minimax", cap=1000)

    def test_witness_consistent(self):
        sol = mnp_solve(EXAMPLE, 4, "min_gap", branch_and_bound=True)
        assert weighted_loads(sol.assignment, EXAMPLE, 4) == sol.loads
        assert objective_value(sol.objective, sol.loads) == sol.value


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.integers(1, 9), min_size=1, max_size=7),
    st.integers(1, 4),
    st.sampled_from(list(MnpObjective)),
)
def test_branch_and_bound_matches_exhaustive(weights, m, obj):
    a = mnp_solve(weights, m, obj, cap=4**7)
    b = mnp_solve(weights, m, obj, branch_and_bound=True)
    assert (a.value, a.argmin) == (b.value, b.argmin)


class TestCBarEquivalence:
    def test_example(self):
        rep = weighted_c_bar_equivalence_check(EXAMPLE, 4)
        assert rep.linear_argmin == ((5, 3, 3, 2),)
        assert rep.ok

    def test_pair(self):
        assert weighted_c_bar_equivalence_check((1, 1), 2).linear_argmin == ((1, 1),)

    def test_exponential(self):
        rep = weighted_c_bar_equivalence_check((3, 2, 1), 2)
        assert rep.exponential_argmin == ((3, 3),)
        assert rep.exponential_within_minimax


class TestHatCSearch:
    def test_counter_example(self):
        res = find_hat_c_optimal_partition(WeightedGame((1, 2, 3), 2, ID))
        assert res.partition is None
        assert res.minimax == 3
        assert res.checked == 5
        grand = next(r for r in res.rejections if r.partition == Partition.grand(3))
        assert grand.reason == "no-agreement"
        (diag,) = grand.diagnoses
        assert diag.agreement == "[3|21]"
        assert diag.credible and diag.pareto_optimal and not diag.envy_free
        assert diag.base_weights == ((1, 2), (2, 1), (3, 0))
        others = [r for r in res.rejections if r.partition != Partition.grand(3)]
        assert all(r.reason == "miscoordination" and r.suboptimal_probability > 0 for r in others)

    def test_equal_weights(self):
        res = find_hat_c_optimal_partition(WeightedGame((2, 2, 2, 2), 2, ID))
        assert res.partition == Partition.grand(4)
        assert res.minimax == 4
        assert is_single_unequal_coalition(WeightedGame((2, 2, 2, 2), 2, ID), res.partition)

    def test_pair(self):
        res = find_hat_c_optimal_partition(WeightedGame((1, 1), 2, ID))
        assert res.partition == Partition.grand(2)

    def test_oracle_path_agrees(self):
        for ws in [(1, 2, 3), (2, 2, 2, 2), (1, 1, 2), (3, 1, 1, 1)]:
            g = WeightedGame(ws, 2, ID)
            a = find_hat_c_optimal_partition(g)
            b = find_hat_c_optimal_partition(g, oracle=True)
            assert a.partition == b.partition

    def test_bound(self):
        with pytest.raises(CapExceeded):
            find_hat_c_optimal_partition(WeightedGame((1,) * 9, 2, ID))


def test_fractional_cost():
    f = CostFunction.linear(6, "3/2")
    g = WeightedGame((1, 2, 3), 2, f)
    assert weighted_total_cost(g, (0, 0, 1)) == 3 * Fraction(9, 2) + 3 * Fraction(9, 2)
