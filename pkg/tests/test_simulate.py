from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from budgetsearch.core import HiderDistribution, LineInstance, unit_profit
from budgetsearch.equilibrium import solve_equilibrium
from budgetsearch.line import compute_hw, game_value_line, greedy_loop
from budgetsearch.simulate import (line_transcript, make_rng, sample_discrete,
                                   sample_line_starts, simulate)


def test_rng_is_reproducible():
    a = make_rng(5).integers(0, 1000, size=10)
    b = make_rng(5).integers(0, 1000, size=10)
    assert (a == b).all()
    assert not (a == make_rng(6).integers(0, 1000, size=10)).all()


def test_sample_discrete_respects_zero_mass():
    rng = make_rng(1)
    draws = sample_discrete(rng, [Fraction(0), Fraction(1, 3), Fraction(0), Fraction(2, 3)], 5000)
    assert set(draws.tolist()) == {1, 3}
    assert abs((draws == 3).mean() - 2 / 3) < 0.03


def test_sample_discrete_huge_denominators():
    p = 2**61 - 1
    q = 2**89 - 1
    weights = [Fraction(1, p), Fraction(1, q), 1 - Fraction(1, p) - Fraction(1, q)]
    draws = sample_discrete(make_rng(2), weights, 200)
    assert set(draws.tolist()) <= {0, 1, 2}
    assert (draws == 2).sum() >= 199


def test_line_starts_follow_the_greedy_order():
    starts = sample_line_starts(11, 3, 2000, seed=3)
    assert set(starts.tolist()) == set(greedy_loop(11, 3)[0])
    counts = Counter(starts.tolist())
    assert min(counts.values()) > 300


def test_line_transcript():
    # the strategy from 0 covers 0..6 and leaves [7, 10] as one part
    assert line_transcript(11, 3, 0, 6) == [((3, 4), 4), ((5, 6), 6), ((6, 7), 6)]
    assert line_transcript(11, 3, 0, 8) == [((3, 4), 4), ((5, 6), 6), ((6, 7), 7)]


def test_simulate_small_line_is_exact():
    value, x, y = game_value_line(4, 2)
    rep = simulate(x, y, unit_profit(2), 1000, seed=0)
    assert rep.mean == 1 and rep.standard_error == 0
    assert rep.theoretical_value == 1


def test_simulate_per_vertex_coverage():
    n, k = 12, 3
    value, x, y = game_value_line(n, k)
    rep = simulate(x, y, unit_profit(k), 20000, seed=4)
    assert rep.theoretical_value == value == Fraction(5, 9)
    for v in range(1, n - 1):
        se = rep.vertex_standard_error[v]
        assert abs(rep.vertex_coverage[v] - 5 / 9) <= 4 * se + 1e-12
    d = rep.to_dict()
    assert d["theoretical_value"] == "5/9" and d["trials"] == 20000


def test_simulate_tree_equilibrium():
    inst = LineInstance(9, 2).as_tree()
    res = solve_equilibrium(inst)
    rep = simulate(res.seeker, res.hider, inst.profit, 20000, seed=9)
    assert abs(float(rep.mean) - float(res.value)) <= 4 * rep.standard_error + 1e-12


def test_simulate_rejects_zero_trials():
    value, x, y = game_value_line(11, 3)
    with pytest.raises(ValueError):
        simulate(x, y, unit_profit(3), 0, seed=0)
