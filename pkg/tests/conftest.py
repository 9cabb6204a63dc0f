import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from budgetsearch.core import HiderDistribution, TreeInstance

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[str, str] = {}


def random_tree_edges(rng: random.Random, n: int) -> tuple[tuple[int, int], ...]:
    """Random labelled tree by attaching each vertex to an earlier one, then relabelling."""
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(perm[rng.randrange(i)], perm[i]) for i in range(1, n)]
    rng.shuffle(edges)
    return tuple(edges)


def random_profit(rng: random.Random, k: int, top: int = 6) -> tuple[int, ...]:
    return tuple(sorted((rng.randint(0, top) for _ in range(k)), reverse=True))


def random_hider(rng: random.Random, n: int, top: int = 9) -> HiderDistribution:
    weights = [rng.randint(0, top) for _ in range(n)]
    weights[rng.randrange(n)] += 1
    total = sum(weights)
    return HiderDistribution(tuple(Fraction(a, total) for a in weights))


def random_instance(rng: random.Random, n_max: int, k_max: int, n_min: int = 2) -> TreeInstance:
    n = rng.randint(n_min, n_max)
    k = rng.randint(1, k_max)
    return TreeInstance(n, random_tree_edges(rng, n), k, random_profit(rng, k),
                        random_hider(rng, n))


@st.composite
def tree_instances(draw, n_max: int = 8, k_max: int = 3, n_min: int = 2):
    """Hypothesis strategy for small instances with a hider."""
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(random.Random(seed), n_max, k_max, n_min)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES.values():
        terminalreporter.write_line(line)
