"""Shared domain types and payoff semantics of the budgeted search game.

Vertices are 0-based. Every probability and payoff is an exact
:class:`fractions.Fraction`; nothing in a solver path touches floats.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class InvalidInstance(ValueError):
    """Raised for malformed graphs, budgets, profit tables or distributions."""


class GuardExceeded(RuntimeError):
    """Raised when an exponential routine would exceed its size guard."""


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str | int | Fraction) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInstance(f"not a rational: {s!r}") from exc


# ---------------------------------------------------------------------------
# modular intervals


@dataclass(frozen=True)
class ModInterval:
    """The interval ``[start (+) length]_modulus`` = {start, ..., start+length-1} mod r."""

    start: int
    length: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise ValueError("modulus must be positive")
        if not 0 <= self.length <= self.modulus:
            raise ValueError(f"length {self.length} outside [0, {self.modulus}]")
        object.__setattr__(self, "start", self.start % self.modulus)

    @property
    def end(self) -> int:
        """Last element (mod r); undefined for empty intervals."""
        return (self.start + self.length - 1) % self.modulus

    def __len__(self) -> int:
        return self.length

    def __contains__(self, v: int) -> bool:
        return (v - self.start) % self.modulus < self.length

    def __iter__(self) -> Iterator[int]:
        r = self.modulus
        return ((self.start + i) % r for i in range(self.length))

    @property
    def wraps(self) -> bool:
        return self.start + self.length > self.modulus

    def isdisjoint(self, other: ModInterval) -> bool:
        if self.modulus != other.modulus:
            raise ValueError("intervals over different moduli")
        if not self.length or not other.length:
            return True
        return other.start not in self and self.start not in other

    def __repr__(self) -> str:
        return f"[{self.start}+{self.length}]_{self.modulus}"


def intervals_of(vertices: Iterable[int], modulus: int) -> list[ModInterval]:
    """Decompose a vertex set into the minimal number of intervals mod ``modulus``.

    Intervals are returned sorted by start vertex.
    """
    vs = sorted(set(vertices))
    if not vs:
        return []
    if len(vs) == modulus:
        return [ModInterval(0, modulus, modulus)]
    runs: list[list[int]] = []
    for v in vs:
        if runs and runs[-1][1] == v - 1:
            runs[-1][1] = v
        else:
            runs.append([v, v])
    # glue a run ending at r-1 onto a run starting at 0
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == modulus - 1:
        first = runs.pop(0)
        runs[-1][1] = first[1] + modulus
    out = [ModInterval(a, b - a + 1, modulus) for a, b in runs]
    return sorted(out, key=lambda iv: iv.start)


# ---------------------------------------------------------------------------
# graphs and instances


def path_edges(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((v, v + 1) for v in range(n - 1))


def check_tree(n: int, edges: Sequence[tuple[int, int]]) -> None:
    if n < 2:
        raise InvalidInstance("need at least two vertices")
    if len(edges) != n - 1:
        raise InvalidInstance(f"a tree on {n} vertices has {n - 1} edges, got {len(edges)}")
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InvalidInstance(f"bad edge {(u, v)}")
        ru, rv = find(u), find(v)
        if ru == rv:
            raise InvalidInstance(f"edge {(u, v)} closes a cycle")
        parent[ru] = rv


def check_profit(profit: Sequence[int], k: int) -> tuple[int, ...]:
    """Normalise a profit table to ``(p(1), ..., p(k), p(k+1)=0)``."""
    p = [int(x) for x in profit]
    if len(p) == k + 1:
        if p[-1] != 0:
            raise InvalidInstance("p(k+1) must be 0")
    elif len(p) == k:
        p.append(0)
    else:
        raise InvalidInstance(f"profit table needs k={k} entries, got {len(p)}")
    if any(x < 0 for x in p):
        raise InvalidInstance("profits must be non-negative")
    if any(a < b for a, b in zip(p, p[1:])):
        raise InvalidInstance("profit must be non-increasing")
    return tuple(p)


def unit_profit(k: int) -> tuple[int, ...]:
    return (1,) * k + (0,)


@dataclass(frozen=True)
class LineInstance:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInstance("a line needs n >= 2")
        if self.k < 0:
            raise InvalidInstance("budget must be non-negative")

    @property
    def c(self) -> int:
        return 2**self.k - 2

    def as_tree(self, hider: HiderDistribution | None = None) -> TreeInstance:
        return TreeInstance(self.n, path_edges(self.n), self.k, unit_profit(self.k), hider)


@dataclass(frozen=True)
class TreeInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    k: int
    profit: tuple[int, ...] = ()
    hider: HiderDistribution | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.k < 0:
            raise InvalidInstance("budget must be non-negative")
        check_tree(self.n, edges)
        profit = self.profit if self.profit else unit_profit(self.k)
        object.__setattr__(self, "profit", check_profit(profit, self.k))
        if self.hider is not None and len(self.hider) != self.n:
            raise InvalidInstance("hider distribution has the wrong length")

    def p(self, t: int) -> int:
        """Profit for discovery after ``t`` queries (0 beyond the budget)."""
        if t < 1:
            raise ValueError("discovery time starts at 1")
        return self.profit[t - 1] if t <= self.k else 0

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    @property
    def is_path(self) -> bool:
        return set(map(frozenset, self.edges)) == set(map(frozenset, path_edges(self.n)))

    def with_hider(self, hider: HiderDistribution | None) -> TreeInstance:
        return TreeInstance(self.n, self.edges, self.k, self.profit, hider)

    # -- JSON -------------------------------------------------------------

    def to_dict(self) -> dict:
        d = {"n": self.n, "edges": [list(e) for e in self.edges], "k": self.k,
             "profit": list(self.profit[:-1])}
        if self.hider is not None:
            d["hider"] = [format_rational(q) for q in self.hider]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> TreeInstance:
        try:
            n, k = int(d["n"]), int(d["k"])
            edges = tuple(tuple(e) for e in d["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstance(f"malformed instance: {exc}") from exc
        if any(len(e) != 2 for e in edges):
            raise InvalidInstance("edges must be pairs")
        profit = tuple(d.get("profit") or unit_profit(k)[:-1])
        hider = None
        if d.get("hider") is not None:
            hider = HiderDistribution(tuple(parse_rational(s) for s in d["hider"]))
        return cls(n, edges, k, profit, hider)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> TreeInstance:
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInstance(f"not JSON: {exc}") from exc


def components_without(adjacency: Sequence[Sequence[int]], vertices: Iterable[int],
                       edge: tuple[int, int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a connected vertex set along ``edge = (u, v)``; returns (side of u, side of v)."""
    inside = set(vertices)
    u, v = edge
    if u not in inside or v not in inside or v not in adjacency[u]:
        raise ValueError(f"edge {edge} is not inside the component")
    seen = {u}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        for b in adjacency[a]:
            if b in inside and b not in seen and not (a == u and b == v):
                seen.add(b)
                queue.append(b)
    return tuple(sorted(seen)), tuple(sorted(inside - seen))


# ---------------------------------------------------------------------------
# distributions


@dataclass(frozen=True)
class HiderDistribution:
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        masses = tuple(Fraction(q) for q in self.masses)
        object.__setattr__(self, "masses", masses)
        if any(q < 0 for q in masses):
            raise InvalidInstance("hider masses must be non-negative")
        if sum(masses) != 1:
            raise InvalidInstance(f"hider masses sum to {sum(masses)}, not 1")

    @classmethod
    def uniform(cls, n: int) -> HiderDistribution:
        return cls((Fraction(1, n),) * n)

    @classmethod
    def point(cls, n: int, v: int) -> HiderDistribution:
        return cls(tuple(Fraction(int(u == v)) for u in range(n)))

    def __len__(self) -> int:
        return len(self.masses)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.masses)

    def __getitem__(self, v: int) -> Fraction:
        return self.masses[v]

    def mass(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.masses[v] for v in vertices), Fraction(0))


# ---------------------------------------------------------------------------
# search strategies


@dataclass(frozen=True)
class SearchTree:
    """A query strategy: an internal node queries ``edge`` and has one child per side.

    ``children[0]`` is the strategy for the component of ``edge[0]``,
    ``children[1]`` for the component of ``edge[1]``. Leaves carry the set of
    vertices still consistent with all answers.
    """

    vertices: tuple[int, ...]
    edge: tuple[int, int] | None = None
    children: tuple[SearchTree, SearchTree] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.edge is None

    @cached_property
    def height(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(c.height for c in self.children)

    def leaves(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield ``(vertex set, depth)`` for every leaf."""
        stack = [(self, 0)]
        while stack:
            node, depth = stack.pop()
            if node.is_leaf:
                yield node.vertices, depth
            else:
                for child in reversed(node.children):
                    stack.append((child, depth + 1))

    def queries(self) -> Iterator[tuple[tuple[int, int], int]]:
        """Yield ``(edge, depth)`` for every internal node."""
        stack = [(self, 0)]
        while stack:
            node, depth = stack.pop()
            if not node.is_leaf:
                yield node.edge, depth
                for child in reversed(node.children):
                    stack.append((child, depth + 1))

    def locate(self, target: int) -> list[tuple[tuple[int, int], int]]:
        """Play the strategy against ``target``: list of (queried edge, answer endpoint)."""
        out = []
        node = self
        while not node.is_leaf:
            left, right = node.children
            side = 0 if target in left.vertices else 1
            out.append((node.edge, node.edge[side]))
            node = node.children[side]
        return out

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"leaf": list(self.vertices)}
        return {"query": list(self.edge), "children": [c.to_dict() for c in self.children]}

    @classmethod
    def from_dict(cls, d: dict) -> SearchTree:
        if "leaf" in d:
            return cls(tuple(sorted(d["leaf"])))
        a, b = (cls.from_dict(c) for c in d["children"])
        return cls(tuple(sorted(a.vertices + b.vertices)), tuple(d["query"]), (a, b))

    def check(self, adjacency: Sequence[Sequence[int]]) -> None:
        """Raise ``ValueError`` unless every query splits its component correctly."""
        for node in _walk(self):
            if node.is_leaf:
                continue
            side_u, side_v = components_without(adjacency, node.vertices, node.edge)
            if (node.children[0].vertices, node.children[1].vertices) != (side_u, side_v):
                raise ValueError(f"children of query {node.edge} do not match its components")


def _walk(tree: SearchTree) -> Iterator[SearchTree]:
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        if not node.is_leaf:
            stack.extend(node.children)


def empty_strategy(vertices: Iterable[int]) -> SearchTree:
    return SearchTree(tuple(sorted(vertices)))


def covered_set(tree: SearchTree) -> frozenset[int]:
    return frozenset(vs[0] for vs, _ in tree.leaves() if len(vs) == 1)


def discovery_times(tree: SearchTree, n: int, k: int) -> tuple[int, ...]:
    """``h_T(v)``: depth of the singleton leaf ``{v}``, or ``k+1`` if ``v`` is not covered."""
    h = [k + 1] * n
    for vs, depth in tree.leaves():
        if len(vs) == 1 and depth <= k:
            h[vs[0]] = depth
    return tuple(h)


def payoff_profile(tree: SearchTree, instance: TreeInstance) -> tuple[int, ...]:
    return tuple(instance.p(t) for t in discovery_times(tree, instance.n, instance.k))


# ---------------------------------------------------------------------------
# mixed strategies


@dataclass(frozen=True)
class LineStart:
    """Compact descriptor of the efficient line strategy starting at ``v``."""

    n: int
    k: int
    v: int

    def tree(self) -> SearchTree:
        from .line import efficient_strategy

        return efficient_strategy(self.v, self.n, self.k)


@dataclass(frozen=True)
class SeekerMixedStrategy:
    support: tuple[SearchTree | LineStart, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(Fraction(q) for q in self.weights)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "support", tuple(self.support))
        if len(weights) != len(self.support) or not weights:
            raise InvalidInstance("support and weights must be non-empty and aligned")
        if any(q < 0 for q in weights) or sum(weights) != 1:
            raise InvalidInstance("seeker weights must form a distribution")

    @classmethod
    def uniform(cls, support: Sequence[SearchTree | LineStart]) -> SeekerMixedStrategy:
        return cls(tuple(support), (Fraction(1, len(support)),) * len(support))

    @classmethod
    def point(cls, tree: SearchTree) -> SeekerMixedStrategy:
        return cls((tree,), (Fraction(1),))

    @cached_property
    def trees(self) -> tuple[SearchTree, ...]:
        return tuple(s.tree() if isinstance(s, LineStart) else s for s in self.support)

    @property
    def starts(self) -> tuple[int, ...] | None:
        if all(isinstance(s, LineStart) for s in self.support):
            return tuple(s.v for s in self.support)
        return None

    def height(self) -> int:
        return max(t.height for t in self.trees)


def seeker_payoffs(x: SeekerMixedStrategy, profit: Sequence[int], n: int) -> list[Fraction]:
    """Per-vertex expected profit ``sum_T x_T p(h_T(v))`` (profit table includes p(k+1)=0)."""
    k = len(profit) - 1
    out = [Fraction(0)] * n
    for tree, weight in zip(x.trees, x.weights):
        if not weight:
            continue
        for v, t in enumerate(discovery_times(tree, n, k)):
            if t <= k and profit[t - 1]:
                out[v] += weight * profit[t - 1]
    return out


def expected_profit(x: SeekerMixedStrategy, y: HiderDistribution,
                    profit: Sequence[int]) -> Fraction:
    payoff = seeker_payoffs(x, profit, len(y))
    return sum((q * a for q, a in zip(y, payoff)), Fraction(0))
