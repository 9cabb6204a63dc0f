import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from budgetsearch.core import (HiderDistribution, LineInstance, SeekerMixedStrategy,
                               TreeInstance, seeker_payoffs)
from budgetsearch.equilibrium import (IterationLimitExceeded, hider_best_response,
                                      solve_equilibrium)
from budgetsearch.line import binary_search_strategy, efficient_strategy
from budgetsearch.oracle import full_matrix_value
from budgetsearch.treedp import best_response_dp

from conftest import random_instance, tree_instances


def test_eleven_three_line():
    res = solve_equilibrium(LineInstance(11, 3).as_tree())
    assert res.value == Fraction(3, 5)
    assert min(res.seeker_payoffs) == res.value == res.best_response_value
    assert max(res.column_payoffs) == res.value
    d = res.to_dict()
    assert d["value"] == "3/5" and "hider" not in d["instance"]
    assert sum(Fraction(q) for q in d["hider"]) == 1


def test_trivial_trees():
    assert solve_equilibrium(TreeInstance(2, ((0, 1),), 1)).value == 1
    assert solve_equilibrium(TreeInstance(3, ((0, 1), (0, 2)), 1)).value == 0
    zero = TreeInstance(5, ((0, 1), (1, 2), (1, 3), (3, 4)), 2, (0, 0))
    assert solve_equilibrium(zero).value == 0


def test_hider_best_response():
    x = SeekerMixedStrategy.point(efficient_strategy(0, 11, 3))
    v, val = hider_best_response(x, LineInstance(11, 3).as_tree())
    assert val == 0 and v == 7  # covers 0..6
    x = SeekerMixedStrategy.point(binary_search_strategy(4))
    assert hider_best_response(x, LineInstance(4, 2).as_tree()) == (0, 1)


@settings(max_examples=25, deadline=None)
@given(tree_instances(n_max=9, k_max=3))
def test_matches_full_matrix(inst):
    res = solve_equilibrium(inst)
    assert res.value == full_matrix_value(inst).value
    # neither player gains by deviating
    assert best_response_dp(inst, res.hider).value == res.value
    assert hider_best_response(res.seeker, inst)[1] == res.value


@pytest.mark.parametrize("seed", range(5))
def test_scaling_profit_scales_value(seed):
    inst = random_instance(random.Random(seed), 9, 3, n_min=4)
    scaled = TreeInstance(inst.n, inst.edges, inst.k, tuple(3 * p for p in inst.profit))
    assert solve_equilibrium(scaled).value == 3 * solve_equilibrium(inst).value


def test_no_pure_strategy_beats_value_against_random_mixtures():
    inst = LineInstance(12, 3).as_tree()
    res = solve_equilibrium(inst)
    rng = random.Random(0)
    trees = [efficient_strategy(v, 12, 3) for v in [0, *range(2, 12)]]
    for _ in range(20):
        w = [rng.randint(0, 5) for _ in trees]
        w[0] += 1
        x = SeekerMixedStrategy(tuple(trees), tuple(Fraction(a, sum(w)) for a in w))
        assert min(seeker_payoffs(x, inst.profit, 12)) <= res.value


def test_iteration_limit():
    with pytest.raises(IterationLimitExceeded) as err:
        solve_equilibrium(LineInstance(12, 3).as_tree(), max_iters=1)
    assert err.value.lower < err.value.upper
