"""Edge labelings and the best-response dynamic program on trees.

A labeling ``f`` assigns each edge a remaining budget in ``0..k``; it is stored
as a tuple aligned with ``instance.edges``. Label sets (visibility sequences)
are ``(k+1)``-bit masks, bit ``l`` standing for label ``l``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (HiderDistribution, InvalidInstance, SearchTree, TreeInstance,
                   components_without, discovery_times)

Labeling = tuple[int, ...]


def labels_asc(mask: int) -> tuple[int, ...]:
    out = []
    l = 0
    while mask:
        if mask & 1:
            out.append(l)
        mask >>= 1
        l += 1
    return tuple(out)


def lowest_label(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def edge_index(edges: Sequence[tuple[int, int]]) -> dict[tuple[int, int], int]:
    idx = {}
    for i, (u, v) in enumerate(edges):
        idx[u, v] = i
        idx[v, u] = i
    return idx


def labeling_from_mapping(instance: TreeInstance, f: Mapping[tuple[int, int], int]) -> Labeling:
    idx = edge_index(instance.edges)
    out = [0] * len(instance.edges)
    for e, l in f.items():
        out[idx[tuple(e)]] = int(l)
    return tuple(out)


@dataclass(frozen=True)
class Orientation:
    """The tree rooted at ``root`` with children kept in adjacency order."""

    root: int
    parent: tuple[int, ...]
    parent_edge: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]  # breadth-first, parents before children


def orient(instance: TreeInstance, root: int = 0) -> Orientation:
    n, adj = instance.n, instance.adjacency
    idx = edge_index(instance.edges)
    parent = [-1] * n
    parent_edge = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    seen = [False] * n
    seen[root] = True
    order = []
    queue = deque([root])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v], parent_edge[v] = u, idx[u, v]
                children[u].append(v)
                queue.append(v)
    return Orientation(root, tuple(parent), tuple(parent_edge),
                       tuple(map(tuple, children)), tuple(order))


# ---------------------------------------------------------------------------
# validity and visibility


def _check_range(f: Sequence[int], instance: TreeInstance) -> bool:
    return len(f) == len(instance.edges) and all(0 <= l <= instance.k for l in f)


def visibility_sequences(f: Sequence[int], instance: TreeInstance,
                         orientation: Orientation | None = None) -> tuple[dict[int, int], list[int]]:
    """Bottom-up visibility masks: ``L`` keyed by edge index, ``S`` per vertex."""
    o = orientation or orient(instance)
    L: dict[int, int] = {}
    S = [0] * instance.n
    for v in reversed(o.order):
        for c in o.children[v]:
            S[v] |= L[o.parent_edge[c]]
        if v != o.root:
            l = f[o.parent_edge[v]]
            L[o.parent_edge[v]] = (1 << l) | (S[v] & ~((1 << l) - 1))
    return L, S


def labeling_is_valid(f: Sequence[int], instance: TreeInstance,
                      orientation: Orientation | None = None) -> bool:
    """Local test: incoming labels avoid the child's visible set, sibling sets overlap only at 0."""
    if not _check_range(f, instance):
        return False
    o = orientation or orient(instance)
    L, S = visibility_sequences(f, instance, o)
    for v in range(instance.n):
        if v != o.root:
            l = f[o.parent_edge[v]]
            if l and S[v] >> l & 1:
                return False
        seen = 0
        for c in o.children[v]:
            mask = L[o.parent_edge[c]]
            if seen & mask & ~1:
                return False
            seen |= mask
    return True


def labeling_is_valid_pairwise(f: Sequence[int], instance: TreeInstance) -> bool:
    """Pairwise test: equal positive labels need a strictly larger label between them."""
    if not _check_range(f, instance):
        return False
    adj = instance.adjacency
    idx = edge_index(instance.edges)
    for i, (a, b) in enumerate(instance.edges):
        l = f[i]
        if l == 0:
            continue
        # walk away from edge i through edges labelled below l
        seen = {a, b}
        queue = deque([a, b])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                j = idx[u, v]
                if j == i or v in seen:
                    continue
                if f[j] == l:
                    return False
                if f[j] < l:
                    seen.add(v)
                    queue.append(v)
    return True


def labeling_times(f: Sequence[int], instance: TreeInstance) -> tuple[int, ...]:
    """``h_f(v) = k + 1 - min`` label on an edge at ``v``."""
    idx = edge_index(instance.edges)
    k = instance.k
    return tuple(k + 1 - min(f[idx[v, u]] for u in instance.adjacency[v])
                 for v in range(instance.n))


def labeling_profile(f: Sequence[int], instance: TreeInstance) -> tuple[int, ...]:
    return tuple(instance.p(t) for t in labeling_times(f, instance))


def labeling_profit(f: Sequence[int], instance: TreeInstance,
                    y: HiderDistribution | None = None) -> Fraction:
    y = y or instance.hider
    return sum((q * a for q, a in zip(y, labeling_profile(f, instance))), Fraction(0))


# ---------------------------------------------------------------------------
# dynamic program


@dataclass(frozen=True)
class DPStats:
    table_entries: int
    pair_work: int


@dataclass(frozen=True)
class BestResponse:
    value: Fraction
    labeling: Labeling
    stats: DPStats

    def strategy(self, instance: TreeInstance) -> SearchTree:
        return labeling_to_strategy(self.labeling, instance)


def _scaled_hider(y: HiderDistribution) -> tuple[list[int], int]:
    den = math.lcm(*(q.denominator for q in y))
    return [q.numerator * (den // q.denominator) for q in y], den


def _better(val, key, best) -> bool:
    return best is None or val > best[0] or (val == best[0] and key > best[1])


def best_response_dp(instance: TreeInstance, y: HiderDistribution | None = None,
                     check: bool = True) -> BestResponse:
    """Maximum of ``sum_v y_v p(h_f(v))`` over valid labelings, with an arg-max labeling.

    Tables are sparse dicts; an absent key is an impossible state, so no
    sentinel value ever enters the arithmetic. Ties go to the lexicographically
    larger ascending label tuple.
    """
    y = y or instance.hider
    if y is None:
        raise InvalidInstance("best response needs a hider distribution")
    if len(y) != instance.n:
        raise InvalidInstance("hider distribution has the wrong length")
    k, profit = instance.k, instance.profit
    Y, den = _scaled_hider(y)
    o = orient(instance)
    # C[v][i]: dict S -> (value, key, (L, R)); B[edge]: dict L -> (value, key, (S, label))
    C: list[list[dict]] = [[] for _ in range(instance.n)]
    B: dict[int, dict] = {}
    entries = work = 0

    for v in reversed(o.order):
        cur = {0: (0, (), None)}
        for c in o.children[v]:
            e = o.parent_edge[c]
            child = C[c][-1] if C[c] else {0: (0, (), None)}
            table: dict[int, tuple] = {}
            for S, (val, _, _) in child.items():
                work += k + 1
                cands = [(S | 1, val, 0)]
                for l1 in range(1, k + 1):
                    if S >> l1 & 1:
                        continue
                    low = S & ((1 << l1) - 1)
                    m = lowest_label(low | (1 << l1))
                    cands.append(((S & ~((1 << l1) - 1)) | (1 << l1),
                                  val + Y[c] * profit[k - m], l1))
                for Lm, bval, l1 in cands:
                    key = labels_asc(Lm)
                    if _better(bval, key, table.get(Lm)):
                        table[Lm] = (bval, key, (S, l1))
            B[e] = table
            entries += len(table)
            nxt: dict[int, tuple] = {}
            for Lm, (bval, lkey, _) in table.items():
                for R, (cval, rkey, _) in cur.items():
                    work += 1
                    if Lm & R & ~1:
                        continue
                    Sm = Lm | R
                    key = (lkey, rkey)
                    if _better(bval + cval, key, nxt.get(Sm)):
                        nxt[Sm] = (bval + cval, key, (Lm, R))
            cur = nxt
            C[v].append(cur)
            entries += len(cur)

    root = o.root
    top = C[root][-1]
    best = None
    for S, (val, _, _) in top.items():
        total = val + Y[root] * profit[k - lowest_label(S)]
        if _better(total, labels_asc(S), best):
            best = (total, labels_asc(S), S)
    total, _, S_root = best

    labels = [0] * len(instance.edges)
    stack = [(root, len(o.children[root]), S_root)]
    while stack:
        v, i, S = stack.pop()
        if i == 0:
            continue
        Lm, R = C[v][i - 1][S][2]
        c = o.children[v][i - 1]
        e = o.parent_edge[c]
        S_child, l1 = B[e][Lm][2]
        labels[e] = l1
        stack.append((v, i - 1, R))
        stack.append((c, len(o.children[c]), S_child))

    f = tuple(labels)
    value = Fraction(total, den)
    if check:
        if not labeling_is_valid(f, instance, o):
            raise AssertionError("reconstructed labeling is not valid")
        if labeling_profit(f, instance, y) != value:
            raise AssertionError("reconstructed labeling does not attain the table value")
        if not is_locally_maximal(f, instance, y):
            raise AssertionError("a single label increase improves the reconstructed labeling")
    return BestResponse(value, f, DPStats(entries, work))


def is_locally_maximal(f: Sequence[int], instance: TreeInstance,
                       y: HiderDistribution | None = None) -> bool:
    """True when no valid single-edge label increase yields strictly more profit."""
    y = y or instance.hider
    base = labeling_profit(f, instance, y)
    o = orient(instance)
    for i, l in enumerate(f):
        for l2 in range(l + 1, instance.k + 1):
            g = list(f)
            g[i] = l2
            if labeling_is_valid(g, instance, o) and labeling_profit(g, instance, y) > base:
                return False
    return True


# ---------------------------------------------------------------------------
# labelings <-> strategies


def labeling_to_strategy(f: Sequence[int], instance: TreeInstance) -> SearchTree:
    """Query the unique top label, recurse on both sides with the restricted labeling."""
    if not labeling_is_valid(f, instance):
        raise InvalidInstance("labeling is not valid")
    adj = instance.adjacency
    idx = edge_index(instance.edges)

    def build(vertices: tuple[int, ...]) -> SearchTree:
        inside = set(vertices)
        best = None
        for u in vertices:
            for v in adj[u]:
                if u < v and v in inside:
                    l = f[idx[u, v]]
                    if l and (best is None or l > best[0]):
                        best = (l, (u, v))
        if best is None:
            return SearchTree(vertices)
        edge = best[1]
        left, right = components_without(adj, vertices, edge)
        return SearchTree(vertices, edge, (build(left), build(right)))

    return build(tuple(range(instance.n)))


def strategy_to_labeling(tree: SearchTree, instance: TreeInstance) -> Labeling:
    """Label each queried edge with the budget left when it is queried; 0 elsewhere."""
    k = instance.k
    if tree.height > k:
        raise InvalidInstance(f"strategy height {tree.height} exceeds budget {k}")
    idx = edge_index(instance.edges)
    f = [0] * len(instance.edges)
    for edge, depth in tree.queries():
        f[idx[edge]] = k - depth
    return tuple(f)


def strategy_times(tree: SearchTree, instance: TreeInstance) -> tuple[int, ...]:
    return discovery_times(tree, instance.n, instance.k)
