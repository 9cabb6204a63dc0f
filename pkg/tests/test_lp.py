import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from budgetsearch.lp import (INFEASIBLE, OPTIMAL, UNBOUNDED, GameMaster, RationalLP,
                             simplex_solve)

F = Fraction


def check_certificate(lp: RationalLP, res) -> None:
    """Primal feasibility, dual feasibility and equal objectives, all exact."""
    x = res.x
    assert all(v >= 0 for v in x)
    for row, b in zip(lp.A_ub, lp.b_ub):
        assert sum(a * v for a, v in zip(row, x)) <= b
    for row, b in zip(lp.A_eq, lp.b_eq):
        assert sum(a * v for a, v in zip(row, x)) == b
    assert all(q >= 0 for q in res.duals_ub)
    for j, cj in enumerate(lp.c):
        col = sum(r[j] * q for r, q in zip(lp.A_ub, res.duals_ub)) + \
            sum(r[j] * q for r, q in zip(lp.A_eq, res.duals_eq))
        assert col >= cj
    dual_obj = sum(b * q for b, q in zip(lp.b_ub, res.duals_ub)) + \
        sum(b * q for b, q in zip(lp.b_eq, res.duals_eq))
    assert dual_obj == res.objective == sum(c * v for c, v in zip(lp.c, x))


def test_textbook_problem():
    lp = RationalLP([F(3), F(5)], [[F(1), F(0)], [F(0), F(2)], [F(3), F(2)]],
                    [F(4), F(12), F(18)])
    res = simplex_solve(lp)
    assert res.status == OPTIMAL and res.objective == 36 and res.x == (2, 6)
    assert res.duals_ub == (0, F(3, 2), 1)
    check_certificate(lp, res)


def test_rational_data_and_redundant_equalities():
    lp = RationalLP([F(1, 2), F(1, 3)], A_eq=[[F(1), F(1)], [F(2), F(2)]], b_eq=[F(1, 7), F(2, 7)])
    res = simplex_solve(lp)
    assert res.status == OPTIMAL and res.objective == F(1, 14)
    check_certificate(lp, res)


def test_infeasible_and_unbounded():
    assert simplex_solve(RationalLP([F(1)], [[F(1)]], [F(-1)])).status == INFEASIBLE
    assert simplex_solve(RationalLP([F(1), F(0)], [[F(-1), F(1)]], [F(3)])).status == UNBOUNDED
    with pytest.raises(ValueError):
        RationalLP([F(1)], [[F(1), F(2)]], [F(1)])


def test_degenerate_cycling_example():
    # a classic instance on which the largest-coefficient rule cycles
    c = [F(3, 4), F(-150), F(1, 50), F(-6)]
    A = [[F(1, 4), F(-60), F(-1, 25), F(9)], [F(1, 2), F(-90), F(-1, 50), F(3)], [F(0), F(0), F(1), F(0)]]
    lp = RationalLP(c, A, [F(0), F(0), F(1)])
    res = simplex_solve(lp)
    assert res.status == OPTIMAL and res.objective == F(1, 20)
    check_certificate(lp, res)


def _random_lp(rng: random.Random) -> RationalLP:
    nv, mu, me = rng.randint(1, 5), rng.randint(0, 5), rng.randint(0, 2)
    val = lambda: F(rng.randint(-6, 6), rng.choice([1, 1, 2, 3]))
    return RationalLP([val() for _ in range(nv)],
                      [[val() for _ in range(nv)] for _ in range(mu)], [val() for _ in range(mu)],
                      [[val() for _ in range(nv)] for _ in range(me)], [val() for _ in range(me)])


def _scipy_status(lp: RationalLP) -> tuple[str, float | None]:
    kw = {}
    if lp.A_ub:
        kw.update(A_ub=np.array(lp.A_ub, float), b_ub=np.array(lp.b_ub, float))
    if lp.A_eq:
        kw.update(A_eq=np.array(lp.A_eq, float), b_eq=np.array(lp.b_eq, float))
    out = linprog(-np.array(lp.c, float), method="highs", **kw)
    if out.status == 0:
        return OPTIMAL, -out.fun
    if out.status == 2:
        return INFEASIBLE, None
    if out.status == 3:
        return UNBOUNDED, None
    raise AssertionError(out.message)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_against_highs(seed):
    lp = _random_lp(random.Random(seed))
    res = simplex_solve(lp)
    status, obj = _scipy_status(lp)
    if status == OPTIMAL:
        assert res.status == OPTIMAL
        assert abs(float(res.objective) - obj) < 1e-7
        check_certificate(lp, res)
    elif res.status == OPTIMAL:
        # HiGHS may report an unbounded problem as infeasible-or-unbounded
        check_certificate(lp, res)
        raise AssertionError(f"HiGHS says {status}, exact solver found an optimum")
    elif status == INFEASIBLE:
        # confirm with a pure feasibility problem
        feas = RationalLP([F(0)] * len(lp.c), lp.A_ub, lp.b_ub, lp.A_eq, lp.b_eq)
        if simplex_solve(feas).status == OPTIMAL:
            assert res.status == UNBOUNDED
        else:
            assert res.status == INFEASIBLE
    else:
        assert res.status == UNBOUNDED


def test_game_master_matching_pennies():
    master = GameMaster(2)
    master.add_column((1, 0))
    value, x, y = master.solve()
    assert value == 0 and y == (0, 1)
    master.add_column((0, 1))
    value, x, y = master.solve()
    assert value == F(1, 2) and x == (F(1, 2), F(1, 2)) and y == (F(1, 2), F(1, 2))
    with pytest.raises(ValueError):
        master.add_column((1, 2, 3))
    with pytest.raises(ValueError):
        GameMaster(3).solve()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_game_master_minimax(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 6), rng.randint(1, 6)
    M = [[rng.randint(0, 5) for _ in range(n)] for _ in range(m)]
    master = GameMaster(n)
    for col in M:
        master.add_column(col)
    value, x, y = master.solve()
    assert sum(x) == 1 and sum(y) == 1 and min(x) >= 0 and min(y) >= 0
    # x guarantees value at every vertex; y holds every column to value
    assert min(sum(q * M[j][v] for j, q in enumerate(x)) for v in range(n)) == value
    assert max(sum(q * a for q, a in zip(y, M[j])) for j in range(m)) == value
