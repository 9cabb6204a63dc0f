import random
from fractions import Fraction

import pytest

from budgetsearch.core import (GuardExceeded, HiderDistribution, LineInstance, TreeInstance,
                               covered_set, payoff_profile, seeker_payoffs)
from budgetsearch.oracle import (brute_force_best_response, enumerate_strategies,
                                 full_matrix_value, unpack)

from conftest import random_instance


def test_catalog_sizes():
    assert len(enumerate_strategies(LineInstance(2, 1).as_tree())) == 2  # empty, or query the edge
    # one query on four vertices isolates 0 or 3, or nothing
    path4 = enumerate_strategies(LineInstance(4, 1).as_tree())
    assert sorted(path4.payoffs(i) for i in range(len(path4))) == [
        (0, 0, 0, 0), (0, 0, 0, 1), (1, 0, 0, 0)]
    assert len(enumerate_strategies(LineInstance(4, 0).as_tree())) == 1


def test_catalog_trees_reproduce_profiles():
    rng = random.Random(7)
    for _ in range(10):
        inst = random_instance(rng, 8, 3)
        catalog = enumerate_strategies(inst)
        assert len(set(catalog.profiles)) == len(catalog)
        for i in range(len(catalog)):
            tree = catalog.tree(i)
            tree.check(inst.adjacency)
            assert tree.height <= inst.k
            assert payoff_profile(tree, inst) == catalog.payoffs(i)
        M = catalog.matrix()
        assert [tuple(map(int, row)) for row in M] == [catalog.payoffs(i) for i in range(len(catalog))]


def test_wide_profiles_use_python_ints():
    inst = TreeInstance(10, tuple((i, i + 1) for i in range(9)), 2, (2**40, 5))
    catalog = enumerate_strategies(inst)
    M = catalog.matrix()
    assert M.dtype == object
    assert unpack(catalog.profiles[-1], 10, catalog.width) == tuple(M[-1])


def test_guard():
    with pytest.raises(GuardExceeded):
        enumerate_strategies(LineInstance(20, 3).as_tree(), max_profiles=100)


def test_brute_force_best_response():
    line = LineInstance(5, 2).as_tree()
    y = HiderDistribution.point(5, 2)
    value, tree = brute_force_best_response(y, line)
    assert value == 1 and 2 in covered_set(tree)


@pytest.mark.parametrize("n,k,value", [(5, 2, Fraction(1, 2)), (11, 3, Fraction(3, 5)),
                                       (12, 3, Fraction(5, 9)), (6, 2, Fraction(1, 2)),
                                       (4, 1, Fraction(0)), (2, 1, Fraction(1)),
                                       (3, 1, Fraction(0))])
def test_full_matrix_values_on_lines(n, k, value):
    sol = full_matrix_value(LineInstance(n, k).as_tree())
    assert sol.value == value
    assert min(seeker_payoffs(sol.seeker, (1,) * k + (0,), n)) == value


def test_star_values():
    star = TreeInstance(4, ((0, 1), (0, 2), (0, 3)), 2)
    # with two queries the hider can always sit on an unqueried leaf or the centre
    sol = full_matrix_value(star)
    assert sol.value == 0
    big = TreeInstance(4, ((0, 1), (0, 2), (0, 3)), 3)
    assert full_matrix_value(big).value == 1


def test_priced_and_direct_agree():
    rng = random.Random(11)
    for _ in range(6):
        inst = random_instance(rng, 9, 3, n_min=5)
        catalog = enumerate_strategies(inst)
        direct = full_matrix_value(inst, catalog, direct_limit=10**9)
        priced = full_matrix_value(inst, catalog, direct_limit=0)
        assert direct.method == "direct" and priced.method == "priced"
        assert direct.value == priced.value
        for sol in (direct, priced):
            pay = seeker_payoffs(sol.seeker, inst.profit, inst.n)
            assert min(pay) == sol.value
            best, _ = brute_force_best_response(sol.hider, inst, catalog)
            assert best == sol.value
