"""Brute-force ground truth: every strategy of height <= k, up to payoff profile.

Strategies are enumerated recursively over root queries, memoized per
(component, remaining budget). A payoff profile ``(p(h_T(v)))_v`` is packed
into one integer with a fixed-width bit field per vertex, so combining the two
sides of a query is a single OR and deduplication is a set lookup. Nothing
here uses the labeling machinery; the LP solver is shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (GuardExceeded, HiderDistribution, SearchTree, SeekerMixedStrategy,
                   TreeInstance, discovery_times)
from .lp import GameMaster, RationalLP, simplex_solve

DEFAULT_MAX_PROFILES = 2_500_000
DIRECT_LP_LIMIT = 1500


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass
class StrategyCatalog:
    """All payoff profiles of strategies of height <= k, each with a recipe for one tree."""

    instance: TreeInstance
    width: int
    profiles: list[int]
    _recipes: dict

    def __len__(self) -> int:
        return len(self.profiles)

    def payoffs(self, i: int) -> tuple[int, ...]:
        return unpack(self.profiles[i], self.instance.n, self.width)

    def matrix(self) -> np.ndarray:
        """Payoff matrix, one row per profile (int64, or Python ints if too wide)."""
        n, w = self.instance.n, self.width
        if n * w <= 63:
            packed = np.array(self.profiles, dtype=np.uint64)
            shifts = np.arange(n, dtype=np.uint64) * np.uint64(w)
            return ((packed[:, None] >> shifts) & np.uint64((1 << w) - 1)).astype(np.int64)
        return np.array([self.payoffs(i) for i in range(len(self))], dtype=object)

    def tree(self, i: int) -> SearchTree:
        full = (1 << self.instance.n) - 1
        return self._build(full, self.instance.k, self.profiles[i])

    def _build(self, comp: int, budget: int, profile: int) -> SearchTree:
        recipe = self._recipes[comp, budget][profile]
        verts = tuple(_bits(comp))
        if recipe is None:
            return SearchTree(verts)
        edge, side_u, side_v, pu, pv = recipe
        return SearchTree(verts, edge, (self._build(side_u, budget - 1, pu),
                                        self._build(side_v, budget - 1, pv)))

    def covered_set(self, i: int) -> frozenset[int]:
        return frozenset(v for v, t in enumerate(self.times(i)) if t <= self.instance.k)

    def times(self, i: int) -> tuple[int, ...]:
        return discovery_times(self.tree(i), self.instance.n, self.instance.k)


def unpack(profile: int, n: int, width: int) -> tuple[int, ...]:
    mask = (1 << width) - 1
    return tuple((profile >> (width * v)) & mask for v in range(n))


def enumerate_strategies(instance: TreeInstance,
                         max_profiles: int = DEFAULT_MAX_PROFILES) -> StrategyCatalog:
    """Exhaustive catalog; raises :class:`GuardExceeded` past ``max_profiles`` in any memo cell."""
    n, k, adj = instance.n, instance.k, instance.adjacency
    width = max(1, max(instance.profit).bit_length())
    splits: dict[int, list] = {}
    memo: dict[tuple[int, int], dict[int, tuple | None]] = {}

    def split(comp: int) -> list:
        if comp in splits:
            return splits[comp]
        out = []
        for u in _bits(comp):
            for v in adj[u]:
                if u < v and comp >> v & 1:
                    side = 1 << u
                    stack = [u]
                    while stack:
                        a = stack.pop()
                        for b in adj[a]:
                            if comp >> b & 1 and not side >> b & 1 and (a, b) != (u, v):
                                side |= 1 << b
                                stack.append(b)
                    out.append(((u, v), side, comp & ~side))
        splits[comp] = out
        return out

    def solve(comp: int, budget: int) -> dict[int, tuple | None]:
        key = (comp, budget)
        if key in memo:
            return memo[key]
        depth = k - budget
        leaf = 0
        if comp & (comp - 1) == 0 and depth >= 1:
            v = comp.bit_length() - 1
            leaf = instance.p(depth) << (width * v)
        table: dict[int, tuple | None] = {leaf: None}
        if budget > 0 and comp & (comp - 1):
            for edge, side_u, side_v in split(comp):
                left = solve(side_u, budget - 1)
                right = solve(side_v, budget - 1)
                for pu in left:
                    for pv in right:
                        prof = pu | pv
                        if prof not in table:
                            table[prof] = (edge, side_u, side_v, pu, pv)
                if len(table) > max_profiles:
                    raise GuardExceeded(
                        f"more than {max_profiles} profiles on a component of size {bin(comp).count('1')}")
        memo[key] = table
        return table

    full = (1 << n) - 1
    top = solve(full, k)
    return StrategyCatalog(instance, width, sorted(top), memo)


def brute_force_best_response(y: HiderDistribution, instance: TreeInstance,
                              catalog: StrategyCatalog | None = None) -> tuple[Fraction, SearchTree]:
    """Linear scan of the catalog; the first maximizer wins."""
    catalog = catalog or enumerate_strategies(instance)
    best, arg = None, None
    for i in range(len(catalog)):
        val = sum((q * a for q, a in zip(y, catalog.payoffs(i)) if a), Fraction(0))
        if best is None or val > best:
            best, arg = val, i
    return best, catalog.tree(arg)


@dataclass
class MatrixGameSolution:
    value: Fraction
    seeker: SeekerMixedStrategy
    hider: HiderDistribution
    catalog_size: int
    method: str


def full_matrix_value(instance: TreeInstance, catalog: StrategyCatalog | None = None,
                      direct_limit: int = DIRECT_LP_LIMIT) -> MatrixGameSolution:
    """Exact value of the game restricted to nothing: every profile is a column.

    Catalogs up to ``direct_limit`` columns are written out as one LP. Larger
    ones are solved by adding columns on demand, priced exhaustively against
    the whole catalog, which reaches the same optimum.
    """
    catalog = catalog or enumerate_strategies(instance)
    M = catalog.matrix()
    if len(M) <= direct_limit:
        return _direct(instance, catalog, M)
    return _priced(instance, catalog, M)


def _seeker(catalog: StrategyCatalog, idx: Sequence[int], weights: Sequence[Fraction]):
    pairs = [(catalog.tree(i), q) for i, q in zip(idx, weights) if q]
    return SeekerMixedStrategy(tuple(t for t, _ in pairs), tuple(q for _, q in pairs))


def _direct(instance, catalog, M) -> MatrixGameSolution:
    n, m = instance.n, len(M)
    # variables: z, then one weight per profile
    c = [Fraction(1)] + [Fraction(0)] * m
    A_ub = [[Fraction(1)] + [Fraction(-int(M[j][v])) for j in range(m)] for v in range(n)]
    b_ub = [Fraction(0)] * n
    A_eq = [[Fraction(0)] + [Fraction(1)] * m]
    res = simplex_solve(RationalLP(c, A_ub, b_ub, A_eq, [Fraction(1)]))
    if res.status != "optimal":
        raise ArithmeticError(f"full game LP is {res.status}")
    total = sum(res.duals_ub, Fraction(0))
    y = HiderDistribution(tuple(q / total for q in res.duals_ub))
    seeker = _seeker(catalog, range(m), res.x[1:])
    return MatrixGameSolution(res.objective, seeker, y, m, "direct")


def _priced(instance, catalog, M, batch: int = 8) -> MatrixGameSolution:
    n = instance.n
    bound = int(M.max()) * n
    wide = M.dtype == object
    master = GameMaster(n)
    chosen: list[int] = []
    # start from the best column against the uniform hider
    entering = [int(np.argmax(M.sum(axis=1)))]
    while True:
        for j in entering:
            if j in chosen:
                raise AssertionError("pricing returned a column already in the master")
            master.add_column(tuple(int(a) for a in M[j]))
            chosen.append(j)
        value, x, y = master.solve()
        den = math.lcm(*(q.denominator for q in y))
        yi = [q.numerator * (den // q.denominator) for q in y]
        if not wide and max(yi) * bound < 2**62:
            scores = M @ np.array(yi, dtype=np.int64)
        else:
            scores = M.astype(object) @ np.array(yi, dtype=object)
        # every column scoring above the master value is improving; take the best few
        threshold = value * den
        top = np.argpartition(scores, -batch)[-batch:] if len(scores) > batch else np.arange(len(scores))
        entering = sorted((int(j) for j in top if int(scores[j]) > threshold),
                          key=lambda j: (-int(scores[j]), j))
        if not entering:
            break
    seeker = _seeker(catalog, chosen, x)
    return MatrixGameSolution(value, seeker, HiderDistribution(y), len(M), "priced")
