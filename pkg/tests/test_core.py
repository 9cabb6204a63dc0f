import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from budgetsearch.core import (HiderDistribution, InvalidInstance, LineInstance, ModInterval,
                               SearchTree, SeekerMixedStrategy, TreeInstance, check_profit,
                               components_without, covered_set, discovery_times,
                               expected_profit, format_rational, intervals_of, parse_rational,
                               payoff_profile, seeker_payoffs)
from budgetsearch.line import binary_search_strategy

from conftest import random_tree_edges, tree_instances


def test_format_and_parse_rational():
    assert format_rational(Fraction(3, 5)) == "3/5"
    assert format_rational(Fraction(0)) == "0/1"
    assert format_rational(Fraction(2)) == "2/1"
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational("7") == 7
    assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)
    assert parse_rational("0.6") == Fraction(3, 5)
    for bad in ["abc", "1/0"]:
        with pytest.raises(InvalidInstance):
            parse_rational(bad)


def test_mod_interval_wraps():
    iv = ModInterval(9, 4, 11)
    assert list(iv) == [9, 10, 0, 1]
    assert iv.wraps and iv.end == 1
    assert 0 in iv and 2 not in iv and 8 not in iv
    assert iv.isdisjoint(ModInterval(2, 7, 11))
    assert not iv.isdisjoint(ModInterval(1, 2, 11))
    with pytest.raises(ValueError):
        ModInterval(0, 12, 11)


def test_intervals_of_glues_across_zero():
    assert intervals_of({10, 0, 1, 5}, 11) == [ModInterval(5, 1, 11), ModInterval(10, 3, 11)]
    assert intervals_of(range(11), 11) == [ModInterval(0, 11, 11)]
    assert intervals_of([], 11) == []


@given(st.sets(st.integers(0, 14)))
def test_intervals_of_round_trip(vs):
    ivs = intervals_of(vs, 15)
    union = [v for iv in ivs for v in iv]
    assert sorted(union) == sorted(vs)
    assert len(union) == len(set(union))
    # maximal runs: no two intervals touch
    for a in ivs:
        for b in ivs:
            if a != b:
                assert (a.end + 1) % 15 != b.start


def test_profit_normalisation():
    assert check_profit((3, 2), 2) == (3, 2, 0)
    assert check_profit((3, 2, 0), 2) == (3, 2, 0)
    for bad in [(1, 2), (3, 2, 1), (-1, -2), (1,)]:
        with pytest.raises(InvalidInstance):
            check_profit(bad, 2)


@pytest.mark.parametrize("edges", [((0, 1), (1, 2), (2, 0)), ((0, 1),), ((0, 1), (1, 1)),
                                   ((0, 1), (1, 3))])
def test_tree_instance_rejects_non_trees(edges):
    with pytest.raises(InvalidInstance):
        TreeInstance(3, edges, 2)


def test_hider_distribution_validation():
    with pytest.raises(InvalidInstance):
        HiderDistribution((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(InvalidInstance):
        HiderDistribution((Fraction(3, 2), Fraction(-1, 2)))
    with pytest.raises(InvalidInstance):
        TreeInstance(3, ((0, 1), (1, 2)), 1, (1,), HiderDistribution.uniform(4))
    assert HiderDistribution.point(3, 1).masses == (0, 1, 0)


@settings(max_examples=50)
@given(tree_instances(n_max=9, k_max=4))
def test_instance_json_round_trip(inst):
    back = TreeInstance.from_json(inst.to_json())
    assert back == inst
    assert json.loads(inst.to_json())["profit"] == list(inst.profit[:-1])


def test_malformed_json():
    for text in ["not json", '{"n": 3}', '{"n": 3, "k": 1, "edges": [[0, 1, 2], [1, 2]]}']:
        with pytest.raises(InvalidInstance):
            TreeInstance.from_json(text)


def test_components_without():
    adj = TreeInstance(5, ((0, 1), (1, 2), (1, 3), (3, 4)), 2).adjacency
    assert components_without(adj, range(5), (1, 3)) == ((0, 1, 2), (3, 4))
    assert components_without(adj, (1, 3, 4), (3, 4)) == ((1, 3), (4,))
    with pytest.raises(ValueError):
        components_without(adj, range(5), (0, 2))


def test_search_tree_walks_and_serialises():
    tree = binary_search_strategy(4)  # queries (1,2), then (0,1) and (2,3)
    assert tree.edge == (1, 2) and tree.height == 2
    assert sorted(tree.queries()) == [((0, 1), 1), ((1, 2), 0), ((2, 3), 1)]
    assert sorted(tree.leaves()) == [((0,), 2), ((1,), 2), ((2,), 2), ((3,), 2)]
    assert tree.locate(2) == [((1, 2), 2), ((2, 3), 2)]
    assert SearchTree.from_dict(json.loads(json.dumps(tree.to_dict()))) == tree
    tree.check(LineInstance(4, 2).as_tree().adjacency)
    bad = SearchTree((0, 1, 2, 3), (1, 2), (tree.children[1], tree.children[0]))
    with pytest.raises(ValueError):
        bad.check(LineInstance(4, 2).as_tree().adjacency)


def test_discovery_times_and_profiles():
    tree = binary_search_strategy(4)
    inst = TreeInstance(4, ((0, 1), (1, 2), (2, 3)), 2, (5, 2))
    assert discovery_times(tree, 4, 2) == (2, 2, 2, 2)
    assert payoff_profile(tree, inst) == (2, 2, 2, 2)
    # one query short: nothing is covered
    assert discovery_times(tree, 4, 1) == (2, 2, 2, 2)
    assert covered_set(tree) == frozenset(range(4))


def test_mixed_strategy_payoffs():
    t1 = binary_search_strategy(3)  # (1,2) first, then (0,1)
    t2 = SearchTree((0, 1, 2), (1, 2), (SearchTree((0, 1)), SearchTree((2,))))
    x = SeekerMixedStrategy((t1, t2), (Fraction(1, 3), Fraction(2, 3)))
    profit = (4, 1, 0)
    assert discovery_times(t1, 3, 2) == (2, 2, 1)
    assert discovery_times(t2, 3, 2) == (3, 3, 1)
    assert seeker_payoffs(x, profit, 3) == [Fraction(1, 3), Fraction(1, 3), Fraction(4)]
    y = HiderDistribution((Fraction(1, 2), 0, Fraction(1, 2)))
    assert expected_profit(x, y, profit) == Fraction(13, 6)
    with pytest.raises(InvalidInstance):
        SeekerMixedStrategy((t1,), (Fraction(1, 2),))


def test_random_tree_helper_is_a_tree():
    rng = random.Random(3)
    for n in range(2, 30):
        TreeInstance(n, random_tree_edges(rng, n), 2)
