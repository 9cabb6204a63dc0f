"""Exact rational linear programming: a two-phase revised simplex with Bland's rule.

Problems have the form ``max c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0``.
The solver keeps an explicit basis inverse, which is cheap at the sizes used
here (tens of rows), and supports appending columns to a solved problem so
column generation can warm-start from the previous basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class RationalLP:
    c: list[Fraction]
    A_ub: list[list[Fraction]] = field(default_factory=list)
    b_ub: list[Fraction] = field(default_factory=list)
    A_eq: list[list[Fraction]] = field(default_factory=list)
    b_eq: list[Fraction] = field(default_factory=list)

    def __post_init__(self):
        nv = len(self.c)
        for A, b in ((self.A_ub, self.b_ub), (self.A_eq, self.b_eq)):
            if len(A) != len(b) or any(len(row) != nv for row in A):
                raise ValueError("constraint matrix shape does not match")


@dataclass
class LPResult:
    status: str
    objective: Fraction | None = None
    x: tuple[Fraction, ...] = ()
    duals_ub: tuple[Fraction, ...] = ()
    duals_eq: tuple[Fraction, ...] = ()
    pivots: int = 0


class RevisedSimplex:
    """Standard-form simplex over integer data with fraction-free pivoting.

    The basis inverse is held as an integer matrix ``N`` over a common
    denominator ``D`` (the basis determinant up to sign), so every update is an
    exact integer division. Columns and right-hand sides must be integral and
    costs rational; :func:`simplex_solve` scales general rational data first.
    Structural variables come first, then slacks, then artificials.
    """

    def __init__(self, n_ub: int, n_eq: int, b_ub: Sequence, b_eq: Sequence):
        self.m_ub, self.m_eq = n_ub, n_eq
        self.m = n_ub + n_eq
        b = [_integral(q) for q in list(b_ub) + list(b_eq)]
        # rows with a negative right-hand side are negated so b >= 0
        self.sign = [(-1 if q < 0 else 1) for q in b]
        self.b = [abs(q) for q in b]
        self.cols: list[dict[int, int]] = []
        self.cost: list[Fraction] = []
        self.kind: list[str] = []
        self._struct_index: list[int] = []
        self._aux_ready = False
        self.basis: list[int] = []
        self.N: list[list[int]] = []
        self.D = 1
        self.xb: list[int] = []
        self.phase_done = False
        self.pivots = 0

    # -- building ----------------------------------------------------------

    def add_variable(self, ub_col: Sequence, eq_col: Sequence, cost) -> int:
        """Append a structural variable; returns its index among structural variables."""
        col = {}
        for i, a in enumerate(list(ub_col) + list(eq_col)):
            a = _integral(a)
            if a:
                col[i] = a * self.sign[i]
        self._struct_index.append(len(self.cols))
        self.cols.append(col)
        self.cost.append(Fraction(cost))
        self.kind.append("x")
        return len(self._struct_index) - 1

    def _init_auxiliary(self) -> None:
        basis = [None] * self.m
        for i in range(self.m_ub):
            self.cols.append({i: self.sign[i]})
            self.cost.append(_ZERO)
            self.kind.append("slack")
            if self.sign[i] > 0:
                basis[i] = len(self.cols) - 1
        for i in range(self.m):
            if basis[i] is None:
                self.cols.append({i: 1})
                self.cost.append(_ZERO)
                self.kind.append("art")
                basis[i] = len(self.cols) - 1
        self.basis = basis
        self.N = [[int(r == c) for c in range(self.m)] for r in range(self.m)]
        self.D = 1
        self.xb = list(self.b)
        self._aux_ready = True

    # -- linear algebra ----------------------------------------------------

    def _ftran(self, j: int) -> list[int]:
        """Numerators of ``B^-1 A_j`` over ``D``."""
        col = self.cols[j].items()
        return [sum(row[i] * a for i, a in col) for row in self.N]

    def _duals_num(self, cost: Sequence) -> list:
        """Numerators of ``c_B B^-1`` over ``D``."""
        y = [0] * self.m
        for r, j in enumerate(self.basis):
            cj = cost[j]
            if cj:
                for i, a in enumerate(self.N[r]):
                    if a:
                        y[i] += cj * a
        return y

    def _pivot(self, r: int, j: int, alpha: list[int]) -> None:
        ar, D = alpha[r], self.D
        Nr, xr = self.N[r], self.xb[r]
        for i in range(self.m):
            if i == r:
                continue
            ai = alpha[i]
            row = self.N[i]
            if ai:
                self.N[i] = [(a * ar - ai * b) // D for a, b in zip(row, Nr)]
                self.xb[i] = (self.xb[i] * ar - ai * xr) // D
            else:
                self.N[i] = [a * ar // D for a in row]
                self.xb[i] = self.xb[i] * ar // D
        self.D = ar
        if ar < 0:
            self.N = [[-a for a in row] for row in self.N]
            self.xb = [-a for a in self.xb]
            self.D = -ar
        self.basis[r] = j
        self.pivots += 1

    def _iterate(self, cost: Sequence[Fraction], allowed) -> str:
        # a positive rescaling of the objective leaves every pivot decision unchanged
        scale = math.lcm(*(q.denominator for q in cost))
        cost = [int(q * scale) for q in cost]
        while True:
            y = self._duals_num(cost)
            in_basis = set(self.basis)
            enter = None
            for j in range(len(self.cols)):
                if j in in_basis or not allowed(j):
                    continue
                # reduced cost c_j - y.A_j, scaled by D > 0
                if cost[j] * self.D - sum(y[i] * a for i, a in self.cols[j].items()) > 0:
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            alpha = self._ftran(enter)
            leave = None
            for i in range(self.m):
                if alpha[i] > 0:
                    if leave is None:
                        leave = i
                        continue
                    # compare xb_i / alpha_i with the incumbent ratio
                    lhs = self.xb[i] * alpha[leave]
                    rhs = self.xb[leave] * alpha[i]
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[leave]):
                        leave = i
            if leave is None:
                return UNBOUNDED
            self._pivot(leave, enter, alpha)

    # -- driver ------------------------------------------------------------

    def solve(self) -> LPResult:
        if not self._aux_ready:
            self._init_auxiliary()
        if not self.phase_done:
            if "art" in self.kind:
                phase1 = [(-_ONE if kd == "art" else _ZERO) for kd in self.kind]
                self._iterate(phase1, lambda j: True)
                if any(self.xb[r] for r, j in enumerate(self.basis) if self.kind[j] == "art"):
                    return LPResult(INFEASIBLE, pivots=self.pivots)
                self._drive_out_artificials()
            self.phase_done = True
        status = self._iterate(self.cost, lambda j: self.kind[j] != "art")
        if status == UNBOUNDED:
            return LPResult(UNBOUNDED, pivots=self.pivots)
        return self._result()

    def _drive_out_artificials(self) -> None:
        # artificials left at level zero are swapped for structural/slack columns
        # where possible; the rest sit on redundant rows and never move again
        for r in range(self.m):
            if self.kind[self.basis[r]] != "art":
                continue
            in_basis = set(self.basis)
            for j in range(len(self.cols)):
                if j in in_basis or self.kind[j] == "art":
                    continue
                if sum(self.N[r][i] * a for i, a in self.cols[j].items()):
                    self._pivot(r, j, self._ftran(j))
                    break

    def _result(self) -> LPResult:
        values = [_ZERO] * len(self.cols)
        for r, j in enumerate(self.basis):
            values[j] = Fraction(self.xb[r], self.D)
        x = tuple(values[j] for j in self._struct_index)
        y = [Fraction(q) * s / self.D for q, s in zip(self._duals_num(self.cost), self.sign)]
        obj = sum((self.cost[j] * values[j] for j in range(len(self.cols))), _ZERO)
        return LPResult(OPTIMAL, obj, x, tuple(y[:self.m_ub]), tuple(y[self.m_ub:]),
                        self.pivots)


def _integral(q) -> int:
    q = Fraction(q)
    if q.denominator != 1:
        raise ValueError("constraint data must be integral; scale rows first")
    return q.numerator


def simplex_solve(lp: RationalLP) -> LPResult:
    rows = [(row, b) for row, b in zip(lp.A_ub, lp.b_ub)] + \
           [(row, b) for row, b in zip(lp.A_eq, lp.b_eq)]
    scale = [math.lcm(*(Fraction(a).denominator for a in row), Fraction(b).denominator)
             for row, b in rows]
    A = [[Fraction(a) * s for a in row] for (row, _), s in zip(rows, scale)]
    b = [Fraction(q) * s for (_, q), s in zip(rows, scale)]
    m_ub = len(lp.b_ub)
    solver = RevisedSimplex(m_ub, len(lp.b_eq), b[:m_ub], b[m_ub:])
    for j in range(len(lp.c)):
        solver.add_variable([row[j] for row in A[:m_ub]], [row[j] for row in A[m_ub:]], lp.c[j])
    res = solver.solve()
    if res.status == OPTIMAL:
        res.duals_ub = tuple(q * s for q, s in zip(res.duals_ub, scale[:m_ub]))
        res.duals_eq = tuple(q * s for q, s in zip(res.duals_eq, scale[m_ub:]))
    return res


class GameMaster:
    """Seeker's LP restricted to a growing set of pure-strategy payoff columns.

    Variables are the column weights and the guaranteed payoff ``z``; one row
    ``z - sum_T x_T a_T(v) <= 0`` per hider vertex plus ``sum_T x_T = 1``. The
    hider's mixed strategy is read off the duals of the vertex rows.
    """

    def __init__(self, n: int):
        self.n = n
        self.columns: list[tuple[int, ...]] = []
        self._solver = RevisedSimplex(n, 1, [0] * n, [1])
        self._solver.add_variable([1] * n, [0], 1)

    def add_column(self, payoffs: Sequence[int]) -> int:
        payoffs = tuple(payoffs)
        if len(payoffs) != self.n:
            raise ValueError("payoff column has the wrong length")
        self.columns.append(payoffs)
        self._solver.add_variable([-a for a in payoffs], [1], 0)
        return len(self.columns) - 1

    def solve(self) -> tuple[Fraction, tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Return ``(value, column weights, hider distribution)``."""
        if not self.columns:
            raise ValueError("master has no columns")
        res = self._solver.solve()
        if res.status != OPTIMAL:
            raise ArithmeticError(f"restricted master is {res.status}")
        total = sum(res.duals_ub, _ZERO)
        y = tuple(q / total for q in res.duals_ub)
        return res.objective, res.x[1:], y
