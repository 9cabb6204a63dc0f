"""Monte Carlo play of a strategy pair with a seedable counter-based generator.

Every draw goes through integer sampling (numpy's bounded integers are
unbiased), so exact rational weights are honoured without rounding them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (HiderDistribution, LineStart, SearchTree, SeekerMixedStrategy,
                   discovery_times, expected_profit, format_rational)
from .line import compute_hw, efficient_boundaries, play_partition, sample_seeker


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def sample_discrete(rng: np.random.Generator, weights: Sequence[Fraction], size: int) -> np.ndarray:
    """Exact inverse-CDF sampling of indices with rational ``weights``."""
    den = math.lcm(*(Fraction(q).denominator for q in weights))
    ints = [int(Fraction(q) * den) for q in weights]
    cum = np.cumsum(np.array(ints, dtype=object))
    if den < 2**63:
        u = rng.integers(0, den, size=size, dtype=np.int64)
        return np.searchsorted(cum.astype(np.int64), u, side="right")
    # denominators past 64 bits: draw digit by digit through Python ints
    draws = [_big_uniform(rng, den) for _ in range(size)]
    return np.array([int(np.searchsorted(cum, d, side="right")) for d in draws])


def _big_uniform(rng: np.random.Generator, bound: int) -> int:
    bits = bound.bit_length()
    while True:
        words = rng.integers(0, 2**32, size=(bits + 31) // 32, dtype=np.uint64)
        value = 0
        for w in words:
            value = (value << 32) | int(w)
        value >>= (32 * len(words) - bits)
        if value < bound:
            return value


def sample_line_starts(n: int, k: int, draws: int, seed: int) -> np.ndarray:
    """Start vertices of ``draws`` independent picks from the greedy seeker."""
    hw = compute_hw(n, k)
    rng = make_rng(seed)
    idx = rng.integers(0, hw.w, size=draws)
    return np.array([sample_seeker(n, k, int(t), hw) for t in idx])


def line_transcript(n: int, k: int, start: int, target: int) -> list[tuple[tuple[int, int], int]]:
    return play_partition(efficient_boundaries(start, n, k), target)


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    seed: int
    mean: Fraction  # exact average payoff over the trials
    theoretical_value: Fraction
    standard_error: float
    vertex_coverage: tuple[float, ...]
    vertex_standard_error: tuple[float, ...]

    @property
    def empirical_value(self) -> str:
        return f"{float(self.mean):.6f}"

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "empirical_value": self.empirical_value,
            "theoretical_value": format_rational(self.theoretical_value),
            "standard_error": self.standard_error,
            "vertex_coverage": list(self.vertex_coverage),
            "vertex_standard_error": list(self.vertex_standard_error),
        }


def _play(strategy: SearchTree | LineStart, target: int) -> int:
    """Number of queries until ``target`` is isolated, or -1 if it never is."""
    if isinstance(strategy, LineStart):
        bounds = efficient_boundaries(strategy.v, strategy.n, strategy.k)
        steps = play_partition(bounds, target)
        i = int(np.searchsorted(bounds, target, side="right")) - 1
        return len(steps) if bounds[i + 1] - bounds[i] == 1 else -1
    node, depth = strategy, 0
    while not node.is_leaf:
        node = node.children[0] if target in node.children[0].vertices else node.children[1]
        depth += 1
    return depth if len(node.vertices) == 1 else -1


def simulate(x: SeekerMixedStrategy, y: HiderDistribution, profit: Sequence[int],
             trials: int, seed: int) -> SimulationReport:
    """Play ``trials`` independent rounds; ``profit`` lists p(1..k+1)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    k = len(profit) - 1
    n = len(y)
    rng = make_rng(seed)
    if all(q == x.weights[0] for q in x.weights):
        ts = rng.integers(0, len(x.weights), size=trials)
    else:
        ts = sample_discrete(rng, x.weights, trials)
    vs = sample_discrete(rng, y.masses, trials)

    # each distinct (strategy, target) pair is played once and weighted by its count
    pairs, counts = np.unique(np.stack([ts, vs], axis=1), axis=0, return_counts=True)
    total = total_sq = 0
    for (t, v), cnt in zip(pairs, counts):
        depth = _play(x.support[int(t)], int(v))
        if 1 <= depth <= k:
            total += profit[depth - 1] * int(cnt)
            total_sq += profit[depth - 1] ** 2 * int(cnt)
    mean = Fraction(total, trials)
    var = total_sq / trials - float(mean) ** 2
    se = math.sqrt(max(var, 0.0) / trials)

    # per-vertex value from the sampled strategies alone
    t_counts = np.bincount(ts, minlength=len(x.weights))
    cover = np.zeros(n)
    cover_sq = np.zeros(n)
    for t, cnt in enumerate(t_counts):
        if not cnt:
            continue
        times = discovery_times(x.trees[t], n, k)
        pay = np.array([profit[h - 1] if h <= k else 0 for h in times], dtype=float)
        cover += cnt * pay
        cover_sq += cnt * pay**2
    cover /= trials
    vse = np.sqrt(np.maximum(cover_sq / trials - cover**2, 0.0) / trials)
    theory = expected_profit(x, y, profit)
    return SimulationReport(trials, seed, mean, theory, se, tuple(cover.tolist()),
                            tuple(vse.tolist()))
