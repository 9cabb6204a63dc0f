"""Exact equilibria on trees by column generation.

The restricted master is the seeker's LP over the strategies generated so far;
its duals give a hider distribution, and the labeling DP finds the seeker's
best reply to it. A reply that beats the master value becomes a new column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (HiderDistribution, SearchTree, SeekerMixedStrategy, TreeInstance,
                   format_rational, payoff_profile, seeker_payoffs)
from .lp import GameMaster
from .treedp import best_response_dp, labeling_to_strategy


class IterationLimitExceeded(RuntimeError):
    def __init__(self, iterations: int, lower: Fraction, upper: Fraction):
        super().__init__(f"no convergence after {iterations} iterations; "
                         f"value lies in [{lower}, {upper}]")
        self.iterations, self.lower, self.upper = iterations, lower, upper


@dataclass(frozen=True)
class EquilibriumResult:
    instance: TreeInstance
    value: Fraction
    seeker: SeekerMixedStrategy
    hider: HiderDistribution
    iterations: int
    seeker_payoffs: tuple[Fraction, ...]  # per vertex, against the returned x
    column_payoffs: tuple[Fraction, ...]  # per generated column, against the returned y
    best_response_value: Fraction

    def to_dict(self) -> dict:
        inst = self.instance.to_dict()
        inst.pop("hider", None)
        return {
            "instance": inst,
            "value": format_rational(self.value),
            "iterations": self.iterations,
            "seeker": [{"weight": format_rational(q), "strategy": t.to_dict()}
                       for t, q in zip(self.seeker.trees, self.seeker.weights)],
            "hider": [format_rational(q) for q in self.hider],
            "certificate": {
                "seeker_payoffs": [format_rational(q) for q in self.seeker_payoffs],
                "column_payoffs": [format_rational(q) for q in self.column_payoffs],
                "best_response_value": format_rational(self.best_response_value),
            },
        }


def hider_best_response(x: SeekerMixedStrategy, instance: TreeInstance) -> tuple[int, Fraction]:
    """Vertex minimizing the seeker's expected profit (smallest index on ties)."""
    payoff = seeker_payoffs(x, instance.profit, instance.n)
    v = min(range(instance.n), key=lambda u: (payoff[u], u))
    return v, payoff[v]


def _reply(instance: TreeInstance, y: HiderDistribution) -> tuple[Fraction, SearchTree]:
    br = best_response_dp(instance, y)
    return br.value, labeling_to_strategy(br.labeling, instance)


def solve_equilibrium(instance: TreeInstance, max_iters: int = 500) -> EquilibriumResult:
    n = instance.n
    master = GameMaster(n)
    trees: list[SearchTree] = []
    seen: set[tuple[int, ...]] = set()

    def add(tree: SearchTree) -> None:
        profile = payoff_profile(tree, instance)
        if profile in seen:
            raise AssertionError(f"best response repeated an existing column {profile}")
        seen.add(profile)
        trees.append(tree)
        master.add_column(profile)

    _, first = _reply(instance, HiderDistribution.uniform(n))
    add(first)
    for it in range(1, max_iters + 1):
        value, x, y_masses = master.solve()
        y = HiderDistribution(y_masses)
        br_value, tree = _reply(instance, y)
        if br_value <= value:
            break
        if it == max_iters:
            raise IterationLimitExceeded(it, value, br_value)
        add(tree)

    support = [(t, q) for t, q in zip(trees, x) if q]
    seeker = SeekerMixedStrategy(tuple(t for t, _ in support), tuple(q for _, q in support))
    payoffs = tuple(seeker_payoffs(seeker, instance.profit, n))
    columns = tuple(sum((q * a for q, a in zip(y, col)), Fraction(0)) for col in master.columns)
    if min(payoffs) != value or max(columns) > value or br_value != value:
        raise AssertionError("equilibrium certificate does not close")
    return EquilibriumResult(instance, value, seeker, y, it, payoffs, columns, br_value)
