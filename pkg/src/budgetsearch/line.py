"""Closed-form equilibrium of the unit-profit game on a line ``0 - 1 - ... - (n-1)``.

Notation used throughout: ``c = 2**k - 2`` is the number of interior vertices a
single binary search with ``k`` queries can pin down; ``(h, w)`` are the
height and size of the greedy seeker family and the game value is ``h / w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (HiderDistribution, InvalidInstance, LineStart, ModInterval,
                   SearchTree, SeekerMixedStrategy, intervals_of)


class OpCounter:
    """Tally of integer arithmetic operations, used to pin the O(log n) claims."""

    def __init__(self):
        self.count = 0

    def tick(self, k: int = 1) -> None:
        self.count += k


def ext_gcd(a: int, b: int, ops: OpCounter | None = None) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
        if ops is not None:
            ops.tick(7)
    return r0, s0, t0


@dataclass(frozen=True)
class BezoutResult:
    h: int
    w: int
    g: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.h, self.w)

    @property
    def coprime(self) -> bool:
        return self.g == 1


def capacity(k: int) -> int:
    return 2**k - 2


def _check_nontrivial(n: int, k: int) -> None:
    if k < 2:
        raise InvalidInstance(f"closed form needs k >= 2, got k={k}")
    if n <= 2**k:
        raise InvalidInstance(f"n={n} <= 2^k={2**k}: binary search finds every vertex")


def compute_hw(n: int, k: int, ops: OpCounter | None = None) -> BezoutResult:
    """Smallest ``0 < w <= n-2`` with ``h(n-1) - wc`` equal to 1 (coprime) or 0.

    Uses the extended Euclidean algorithm, so the cost is O(log n) operations.
    """
    _check_nontrivial(n, k)
    if ops is not None:
        ops.tick(3)
    c, m = capacity(k), n - 1
    g, s, _ = ext_gcd(c, m, ops)
    if g == 1:
        # s*c = 1 (mod m), so w = -s (mod m) solves w*c = -1 (mod m)
        w = (-s) % m
        h = (w * c + 1) // m
        if ops is not None:
            ops.tick(6)
    else:
        h, w = c // g, m // g
        if ops is not None:
            ops.tick(2)
    return BezoutResult(h, w, g)


def greedy_loop(n: int, k: int) -> tuple[list[int], int]:
    """Reference O(w) run of the greedy packing loop.

    Returns the start vertices in insertion order and the final value of the
    loop variable (0 or 1). Only used to cross-check the closed forms.
    """
    _check_nontrivial(n, k)
    c = capacity(k)
    starts = [0]
    v = c + 1
    while v not in (0, 1):
        starts.append(v)
        v = (v + c) % (n - 1)
    return starts, v


def sample_seeker(n: int, k: int, t: int, hw: BezoutResult | None = None,
                  ops: OpCounter | None = None) -> int:
    """Start vertex of the ``t``-th strategy (0-based) inserted by the greedy loop."""
    hw = hw or compute_hw(n, k, ops)
    if not 0 <= t < hw.w:
        raise ValueError(f"index t={t} outside [0, {hw.w})")
    if t == 0:
        return 0
    if ops is not None:
        ops.tick(3)
    return (t * capacity(k)) % (n - 1) + 1


def greedy_seeker(n: int, k: int) -> SeekerMixedStrategy:
    """Uniform mixture over the ``w`` efficient strategies picked by the greedy packing."""
    hw = compute_hw(n, k)
    starts = [sample_seeker(n, k, t, hw) for t in range(hw.w)]
    return SeekerMixedStrategy.uniform([LineStart(n, k, v) for v in starts])


# ---------------------------------------------------------------------------
# strategies from interval partitions


def efficient_cover(v: int, n: int, k: int) -> ModInterval:
    if v == 1:
        raise ValueError("no efficient strategy covers an interval starting at 1")
    if not 0 <= v < n:
        raise ValueError(f"vertex {v} outside the line")
    c = capacity(k)
    if c + 1 > n - 2:
        raise ValueError("efficient strategies need n > 2^k")
    long = ModInterval(v, c + 1, n)
    if 0 in long or n - 1 in long:
        return long
    return ModInterval(v, c, n)


def cover_boundaries(intervals: Iterable[ModInterval], n: int) -> list[int]:
    """Interval partition ``0 = p_0 < ... < p_j = n`` whose singleton parts are the cover."""
    points = set()
    for iv in intervals:
        for i in range(iv.length + 1):
            points.add((iv.start + i) % n)
    points.discard(0)
    return [0, *sorted(points), n]


def build_strategy_from_partition(boundaries: Sequence[int], k: int) -> SearchTree:
    """Search tree of height <= k whose leaves are the parts ``[p_i, p_{i+1} - 1]``.

    A block of ``j`` parts is split after its first ``2^(q-1)`` parts, where
    ``q`` is the least integer with ``j <= 2^q``.
    """
    b = list(boundaries)
    j = len(b) - 1
    if j < 1 or any(x >= y for x, y in zip(b, b[1:])):
        raise ValueError("boundaries must be strictly increasing")
    if j > 2**k:
        raise ValueError(f"{j} parts need more than k={k} queries")

    def build(lo: int, hi: int) -> SearchTree:
        verts = tuple(range(b[lo], b[hi]))
        if hi - lo == 1:
            return SearchTree(verts)
        mid = lo + 2 ** ((hi - lo - 1).bit_length() - 1)
        cut = b[mid]
        return SearchTree(verts, (cut - 1, cut), (build(lo, mid), build(mid, hi)))

    return build(0, j)


def partition_query(boundaries: Sequence[int], lo: int, hi: int) -> tuple[int, int] | None:
    """Query issued on the block of parts ``lo..hi-1`` (constant time), or None at a leaf."""
    if hi - lo <= 1:
        return None
    mid = lo + 2 ** ((hi - lo - 1).bit_length() - 1)
    return mid, boundaries[mid]


def play_partition(boundaries: Sequence[int], target: int) -> list[tuple[tuple[int, int], int]]:
    """Transcript of the partition strategy against ``target``: (edge, answer endpoint)."""
    out = []
    lo, hi = 0, len(boundaries) - 1
    while (q := partition_query(boundaries, lo, hi)) is not None:
        mid, cut = q
        if target < cut:
            out.append(((cut - 1, cut), cut - 1))
            hi = mid
        else:
            out.append(((cut - 1, cut), cut))
            lo = mid
    return out


def efficient_boundaries(v: int, n: int, k: int) -> list[int]:
    return cover_boundaries([efficient_cover(v, n, k)], n)


def efficient_strategy(v: int, n: int, k: int) -> SearchTree:
    return build_strategy_from_partition(efficient_boundaries(v, n, k), k)


def binary_search_strategy(n: int) -> SearchTree:
    return build_strategy_from_partition(range(n + 1), max(1, (n - 1).bit_length()))


# ---------------------------------------------------------------------------
# covered-set characterisation


def is_maximal_covered_set(intervals: Iterable[ModInterval], n: int, k: int) -> bool:
    """Decide whether the union of ``intervals`` is a maximal covered set on the line."""
    intervals = list(intervals)
    covered: set[int] = set()
    for iv in intervals:
        if iv.modulus != n:
            raise ValueError("intervals must be taken modulo n")
        if not covered.isdisjoint(iv):
            raise ValueError(f"interval {iv} overlaps another one")
        covered.update(iv)
    if n <= 2**k:
        # binary search isolates every vertex
        return len(covered) == n
    c = capacity(k)
    ivs = intervals_of(covered, n)
    s = len(ivs)
    if s == 0 or len(covered) == n:
        return False
    first, last = ivs[0], ivs[-1]
    if first.start == 1 or last.start + last.length - 1 == n - 2:
        return False
    for a, b in zip(ivs, ivs[1:]):
        if b.start - (a.start + a.length) < 2:
            return False
    if first.start - (last.start + last.length - n) < 2:
        return False
    boundary = 0 in covered or n - 1 in covered
    return len(covered) == (c + 2 - s if boundary else c + 1 - s)


# ---------------------------------------------------------------------------
# hider constructions


def hider_noncoprime(n: int, k: int) -> HiderDistribution:
    hw = compute_hw(n, k)
    d = hw.g
    if d == 1:
        raise InvalidInstance("c and n-1 are coprime; use hider_coprime")
    mass = Fraction(1, hw.w * (d - 1))
    return HiderDistribution(tuple(Fraction(0) if v % d == 0 else mass for v in range(n)))


@dataclass(frozen=True)
class Segment:
    start: int
    length: int
    mass: Fraction  # per vertex

    @property
    def stop(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class SegmentLayout:
    segments: tuple[Segment, ...]
    r: int
    t: int


def segment_lengths_rule(n: int, k: int, hw: BezoutResult | None = None) -> list[int]:
    """Greedy segment rule: at each start take the longer length when the ideal mass allows it."""
    hw = hw or compute_hw(n, k)
    h, w, c = hw.h, hw.w, capacity(k)
    r = c // h
    lengths = []
    v, s = 1, 0
    while v <= n - 2:
        # g(v + r* - 1) <= y([1, v-1]) + 1/w, cleared of the common 1/(wc) factor
        rstar = r + 1 if (v + r) * h <= (s + 1) * c else r
        lengths.append(rstar)
        v += rstar
        s += 1
    if v != n - 1 or s != w:
        raise AssertionError(f"segment rule ended at {v - 1} after {s} segments")
    return lengths


def hider_coprime(n: int, k: int) -> tuple[HiderDistribution, SegmentLayout]:
    hw = compute_hw(n, k)
    if hw.g != 1:
        raise InvalidInstance("c and n-1 share a factor; use hider_noncoprime")
    c = capacity(k)
    masses = [Fraction(0)] * n
    segments = []
    v = 1
    for length in segment_lengths_rule(n, k, hw):
        m = Fraction(1, length * hw.w)
        segments.append(Segment(v, length, m))
        masses[v:v + length] = [m] * length
        v += length
    layout = SegmentLayout(tuple(segments), c // hw.h, (n - 1) % c)
    return HiderDistribution(tuple(masses)), layout


def coprime_mass(v: int, n: int, k: int, hw: BezoutResult | None = None) -> Fraction:
    """Mass of vertex ``v`` in the coprime hider without building the whole vector.

    Vertex ``v`` lies in segment ``ceil(v h / c)``, whose last vertex is
    ``floor(s c / h)``.
    """
    hw = hw or compute_hw(n, k)
    if v in (0, n - 1):
        return Fraction(0)
    c = capacity(k)
    s = -((-v * hw.h) // c)
    length = (s * c) // hw.h - ((s - 1) * c) // hw.h
    return Fraction(1, hw.w * length)


def optimal_hider(n: int, k: int) -> HiderDistribution:
    if n <= 2**k:
        return HiderDistribution.uniform(n)
    if compute_hw(n, k).coprime:
        return hider_coprime(n, k)[0]
    return hider_noncoprime(n, k)


def game_value_line(n: int, k: int) -> tuple[Fraction, SeekerMixedStrategy, HiderDistribution]:
    if k < 2:
        raise InvalidInstance("closed form needs k >= 2")
    if n <= 2**k:
        x = SeekerMixedStrategy.point(binary_search_strategy(n))
        return Fraction(1), x, HiderDistribution.uniform(n)
    hw = compute_hw(n, k)
    return hw.value, greedy_seeker(n, k), optimal_hider(n, k)


# ---------------------------------------------------------------------------
# hider verification


@dataclass
class HiderReport:
    n: int
    k: int
    coprime: bool
    checks: dict[str, list] = field(default_factory=dict)

    def record(self, name: str, witness=None) -> None:
        bucket = self.checks.setdefault(name, [])
        if witness is not None and len(bucket) < 20:
            bucket.append(witness)

    @property
    def failures(self) -> dict[str, list]:
        return {k: v for k, v in self.checks.items() if v}

    @property
    def passed(self) -> bool:
        return not self.failures


class _Masses:
    """Prefix sums of an integer-scaled hider for O(1) interval masses."""

    def __init__(self, y: HiderDistribution):
        self.den = math.lcm(*(q.denominator for q in y))
        self.ints = [q.numerator * (self.den // q.denominator) for q in y]
        self.prefix = [0]
        for a in self.ints:
            self.prefix.append(self.prefix[-1] + a)

    def upto(self, v: int) -> int:
        """Scaled mass of [1, v]."""
        return self.prefix[v + 1] - self.prefix[1] if v >= 1 else 0

    def interval(self, start: int, length: int, modulus: int) -> int:
        """Scaled mass of ``[start (+) length]_modulus``."""
        start %= modulus
        stop = start + length
        if stop <= modulus:
            return self.prefix[stop] - self.prefix[start]
        return (self.prefix[modulus] - self.prefix[start]) + self.prefix[stop - modulus]


def verify_hider(y: HiderDistribution, n: int, k: int) -> HiderReport:
    """Check the structural properties the optimality proof relies on, exactly.

    Each entry of ``report.checks`` holds up to 20 witnesses of violation; an
    empty list means the property holds.
    """
    hw = compute_hw(n, k)
    if len(y) != n:
        raise ValueError("distribution length differs from n")
    report = HiderReport(n, k, hw.coprime)
    M = _Masses(y)
    den, h, w, c = M.den, hw.h, hw.w, capacity(k)
    value = Fraction(h, w)

    report.record("endpoints")
    for v in (0, n - 1):
        if y[v]:
            report.record("endpoints", v)

    report.record("efficient_bound")
    for v in range(n):
        if v == 1:
            continue
        iv = efficient_cover(v, n, k)
        if Fraction(M.interval(iv.start, iv.length, n), den) > value:
            report.record("efficient_bound", v)

    if hw.coprime:
        _verify_coprime(y, M, hw, n, k, report)
    else:
        _verify_noncoprime(y, M, hw, n, k, report)
    return report


def _merge_check(M: _Masses, n: int, c: int, report: HiderReport, skip_zero_in_second: bool):
    report.record("merge")
    m = n - 1
    mass = [[M.interval(u, length, m) for length in range(c + 2)] for u in range(m)]
    for u in range(m):
        for ell in range(1, c):
            a = mass[u][ell]
            for s in range(1, c - ell + 1):
                bound = mass[u][ell + s + 1] - a
                for v in range(m):
                    # [v (+) s] must avoid [u (+) ell] (mod n-1)
                    if (v - u) % m < ell or (u - v) % m < s:
                        continue
                    if skip_zero_in_second and (0 - v) % m < s:
                        continue
                    if mass[v][s] > bound:
                        report.record("merge", (u, ell, v, s))


def _verify_noncoprime(y, M: _Masses, hw: BezoutResult, n: int, k: int, report: HiderReport):
    d, w, c = hw.g, hw.w, capacity(k)
    unit = Fraction(1, w * (d - 1))
    report.record("segment_mass")
    for j in range(w):
        if y.mass(range(j * d + 1, j * d + d + 1)) != Fraction(1, w):
            report.record("segment_mass", j)
    report.record("shift_bound")
    m = n - 1
    for v in range(m):
        for ell in range(1, m + 1):
            got = Fraction(M.interval(v, ell, m), M.den)
            if got not in ((ell - ell // d) * unit, (ell - -(-ell // d)) * unit):
                report.record("shift_bound", (v, ell))
    _merge_check(M, n, c, report, skip_zero_in_second=False)


def _verify_coprime(y, M: _Masses, hw: BezoutResult, n: int, k: int, report: HiderReport):
    h, w, c, den = hw.h, hw.w, capacity(k), M.den
    r, t = c // h, (n - 1) % c

    # g(v) = v h / (w c); compare scaled by w*c*den
    def g_cmp(v):
        return v * h * den

    scale = w * c

    report.record("a_ideal_bracket")
    report.record("c_equality_iff_multiple")
    for v in range(1, n - 1):
        y_up = M.upto(v) * scale
        if not (g_cmp(v) <= y_up < g_cmp(v + 1)):
            report.record("a_ideal_bracket", v)
        # with h == 1 every segment is short and the prefix mass meets g everywhere
        if (y_up == g_cmp(v)) != (v % c == 0 or h == 1):
            report.record("c_equality_iff_multiple", v)

    # rebuild the segments from the masses alone
    report.record("segments")
    segments = []
    v = 1
    while v <= n - 2:
        q = y[v]
        length = Fraction(1) / (w * q) if q else None
        if length is None or length.denominator != 1 or int(length) not in (r, r + 1) \
                or v + int(length) - 1 > n - 2 \
                or any(y[u] != q for u in range(v, v + int(length))):
            report.record("segments", v)
            break
        segments.append((v, int(length)))
        v += int(length)

    report.record("b_segment_index")
    report.record("e_segment_count")
    if not report.checks["segments"]:
        for idx, (start, length) in enumerate(segments, 1):
            for u in range(start, start + length):
                if -((-u * h) // c) != idx:
                    report.record("b_segment_index", u)
        if len(segments) != w or segments[-1][0] + segments[-1][1] - 1 != n - 2:
            report.record("e_segment_count", len(segments))
    else:
        report.record("b_segment_index", "no segments")
        report.record("e_segment_count", "no segments")

    report.record("d_periodic")
    for v in range(1, n - 1 - c):
        if y[v] != y[v + c]:
            report.record("d_periodic", v)

    report.record("extrema_first")
    report.record("extrema_t")
    for ell in range(1, c + 1):
        top = M.interval(1, ell, n)
        bottom = M.interval(t, ell, n)
        for v in range(1, c + 1):
            if v + ell - 1 > n - 2:
                # past the zero-mass endpoint the periodic structure stops
                continue
            got = M.interval(v, ell, n)
            if got > top:
                report.record("extrema_first", (v, ell))
            if got < bottom:
                report.record("extrema_t", (v, ell))

    report.record("spread")
    for ell in range(1, c + 1):
        if M.interval(1, ell, n) > M.interval(t, ell + 1, n):
            report.record("spread", ell)

    report.record("efficient_equal")
    for v in range(1, n - c):
        if Fraction(M.interval(v, c, n - 1), den) != Fraction(h, w):
            report.record("efficient_equal", v)

    _merge_check(M, n, c, report, skip_zero_in_second=True)
