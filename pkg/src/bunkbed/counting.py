"""Exact counting functions over main-component classes.

A class (x, y, z) stands for any vertex set of the bunkbed graph with x lower
vertices, y upper vertices and z parallel pairs. Its induced subgraph is, up
to isomorphism, K_x and K_y joined by a z-edge matching; every function here
is a pure integer function of the class (and of the ambient n where vertex
positions matter). Nothing in this module touches floating point except the
display-only interval endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Callable, NamedTuple

import numpy as np

BRUTEFORCE_EDGE_CAP = 20
Q_ENUMERATION_CAP = 10


class ClassIndex(NamedTuple):
    """Isomorphism class of a candidate main component.

    ``x`` lower vertices, ``y`` upper vertices, ``z`` of them stacked in
    parallel pairs.
    """

    x: int
    y: int
    z: int

    @property
    def num_edges(self) -> int:
        x, y, z = self
        return x * (x - 1) // 2 + y * (y - 1) // 2 + z

    def is_valid(self, n: int | None = None) -> bool:
        x, y, z = self
        if x < 0 or y < 0 or z < 0 or z > min(x, y):
            return False
        return n is None or x + y - z <= n

    def swapped(self) -> ClassIndex:
        return ClassIndex(self.y, self.x, self.z)


def _as_class(c) -> ClassIndex:
    return c if isinstance(c, ClassIndex) else ClassIndex(*c)


def _require_valid(c: ClassIndex, n: int | None = None) -> None:
    if not c.is_valid(n):
        where = "" if n is None else f" for n={n}"
        raise ValueError(f"invalid class {tuple(c)}{where}: need 0<=z<=min(x,y), x+y-z<=n")


@lru_cache(maxsize=None)
def binom(a: int, b: int) -> int:
    """C(a, b), zero whenever the selection is impossible (including a < 0)."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def class_edge_list(c) -> tuple[int, list[tuple[int, int]]]:
    """(vertex count, edges) of the representative graph, 0-based.

    Lower vertices are 0..x-1, upper ones x..x+y-1, and lower i is matched to
    upper x+i for i < z.
    """
    x, y, z = _as_class(c)
    edges = [(a, b) for a, b in combinations(range(x), 2)]
    edges += [(x + a, x + b) for a, b in combinations(range(y), 2)]
    edges += [(i, x + i) for i in range(z)]
    return x + y, edges


# ---------------------------------------------------------------------------
# GC: connected spanning subgraphs of the class representative
# ---------------------------------------------------------------------------

def _gc_recurrence(x: int, y: int, z: int, recurse: Callable[[int, int, int], int]) -> int:
    # Vertex types: lower-matched (z), lower-only (x-z), upper-matched (z),
    # upper-only (y-z). An anchor is fixed and every proper vertex subset S
    # containing it is subtracted as (#placements) * GC(S) * 2^e(complement).
    # S picks a1 lower-matched, b1 upper-matched (j of them paired with the
    # a1), a2 lower-only and b2 upper-only vertices; the complement keeps
    # z - a1 - b1 + j intact pairs.
    if x + y == 0:
        return 1
    lo_only, up_only = x - z, y - z
    total = 1 << ClassIndex(x, y, z).num_edges
    sub = 0
    for a1 in range(z + 1):
        for j in range(a1 + 1):
            for b1 in range(j, z - a1 + j + 1):
                paired = comb(a1, j) * comb(z - a1, b1 - j)
                if lo_only:
                    w_a1 = comb(z, a1) * paired
                    a2_choices = [(a2, comb(lo_only - 1, a2 - 1)) for a2 in range(1, lo_only + 1)]
                elif z:
                    if a1 == 0:
                        continue
                    w_a1 = comb(z - 1, a1 - 1) * paired
                    a2_choices = [(0, 1)]
                else:
                    # x == 0: anchor on the upper level, nothing is matched.
                    w_a1 = 1
                    a2_choices = [(0, 1)]
                for a2, w_a2 in a2_choices:
                    if x == 0:
                        b2_choices = [(b2, comb(up_only - 1, b2 - 1)) for b2 in range(1, up_only + 1)]
                    else:
                        b2_choices = [(b2, comb(up_only, b2)) for b2 in range(up_only + 1)]
                    for b2, w_b2 in b2_choices:
                        sx, sy = a1 + a2, b1 + b2
                        if sx == x and sy == y:
                            continue
                        rest = ClassIndex(x - sx, y - sy, z - a1 - b1 + j).num_edges
                        sub += (w_a1 * w_a2 * w_b2 * recurse(sx, sy, j)) << rest
    return total - sub


@lru_cache(maxsize=None)
def _gc_normalized(big: int, small: int, z: int) -> int:
    return _gc_recurrence(big, small, z, _gc_key)


def _gc_key(x: int, y: int, z: int) -> int:
    return _gc_normalized(max(x, y), min(x, y), z)


@lru_cache(maxsize=None)
def gc_unnormalized(x: int, y: int, z: int) -> int:
    """Same recurrence memoized on the raw (x, y, z) key, without symmetry."""
    return _gc_recurrence(x, y, z, gc_unnormalized)


def gc(c) -> int:
    """Number of connected spanning subgraphs of the class representative.

    ``gc((0, 0, 0)) == 1`` by convention (empty product).
    """
    c = _as_class(c)
    _require_valid(c)
    return _gc_key(*c)


def gc_bruteforce(c) -> int:
    """Enumerate all 2^m edge subsets of the representative and count connected ones."""
    from . import _kernels

    c = _as_class(c)
    _require_valid(c)
    m = c.num_edges
    if m > BRUTEFORCE_EDGE_CAP:
        raise ValueError(f"class {tuple(c)} has {m} edges; brute force is capped at {BRUTEFORCE_EDGE_CAP}")
    nv, edges = class_edge_list(c)
    if nv == 0:
        return 1
    eu = np.array([a for a, _ in edges], dtype=np.int64)
    ev = np.array([b for _, b in edges], dtype=np.int64)
    hist = _kernels.subset_histogram(eu, ev, nv, 0, 0, True, 0, 1 << m)
    return int(hist.sum())


def gc_bounds(c) -> tuple[int, int]:
    """(lower, upper) bounds on gc for classes with at least one vertical edge.

    Upper: at least one vertical edge must be open, the rest is free.
    Lower: a connected K_x and a connected K_y glued by at least one vertical.
    """
    c = _as_class(c)
    _require_valid(c)
    x, y, z = c
    if z == 0:
        raise ValueError("gc_bounds needs z >= 1; both bounds vanish at z = 0")
    verticals = (1 << z) - 1
    lower = gc((x, 0, 0)) * verticals * gc((0, y, 0))
    upper = (verticals << (x * (x - 1) // 2)) << (y * (y - 1) // 2)
    return lower, upper


def gc_asymptotic_check(m: int) -> bool:
    """gc(m,0,0) >= 2^{m(m-1)/2} (1 - 3m 2^{-m}), cleared of fractions."""
    if m < 7:
        raise ValueError("the bound is only claimed for m >= 7")
    return (gc((m, 0, 0)) << m) >= ((1 << m) - 3 * m) << (m * (m - 1) // 2)


@dataclass(frozen=True)
class MonotonicityViolation:
    bigger: ClassIndex
    smaller: ClassIndex
    gc_bigger: int
    gc_smaller: int

    def __str__(self) -> str:
        return (f"gc{tuple(self.bigger)}={self.gc_bigger} < "
                f"gc{tuple(self.smaller)}={self.gc_smaller}")


def lemma1_comparisons(size_cap: int, z_cap: int | None = None):
    """(bigger, smaller) class pairs that the monotonicity statement orders.

    First the single steps (x+1, y, z) vs (x, y+1, z) for z <= y < x <= size_cap,
    then every pair with equal x + y <= size_cap and |x-y| >= |x'-y'|.
    """
    z_cap = size_cap if z_cap is None else z_cap
    for x in range(1, size_cap + 1):
        for y in range(x):
            for z in range(min(y, z_cap) + 1):
                yield ClassIndex(x + 1, y, z), ClassIndex(x, y + 1, z)
    for s in range(size_cap + 1):
        for x in range(s + 1):
            for xp in range(s + 1):
                y, yp = s - x, s - xp
                if abs(x - y) < abs(xp - yp):
                    continue
                for z in range(min(x, y, xp, yp, z_cap) + 1):
                    yield ClassIndex(x, y, z), ClassIndex(xp, yp, z)


def verify_lemma1(size_cap: int, z_cap: int | None = None) -> list[MonotonicityViolation]:
    """Every comparison from :func:`lemma1_comparisons` that fails (empty if none)."""
    out = []
    for big, small in lemma1_comparisons(size_cap, z_cap):
        g_big, g_small = gc(big), gc(small)
        if g_big < g_small:
            out.append(MonotonicityViolation(big, small, g_big, g_small))
    return out


# ---------------------------------------------------------------------------
# Vertex-set counts q1, q2 and their signed combination q
# ---------------------------------------------------------------------------

def q1(n: int, c) -> int:
    """Vertex sets of class c containing s1 and s_n (both on the lower level)."""
    c = _as_class(c)
    _require_valid(c, n)
    return _q1_raw(n, *c)


def _q1_raw(n: int, x: int, y: int, z: int) -> int:
    return binom(n - 2, x - 2) * binom(x, z) * binom(n - x, y - z)


def q2(n: int, c) -> int:
    """Vertex sets of class c containing s1 (lower) and s_2n (upper, above s_n).

    Split on whether s_n is in the lower part and whether s_{n+1} (above s1)
    is in the upper part.
    """
    c = _as_class(c)
    _require_valid(c, n)
    return _q2_raw(n, *c)


def _q2_raw(n: int, x: int, y: int, z: int) -> int:
    return (
        binom(n - 2, x - 2) * binom(x - 2, z - 2) * binom(n - x, y - z)
        + binom(n - 2, x - 2) * binom(x - 2, z - 1) * binom(n - x, y - z)
        + binom(n - 2, x - 1) * binom(x - 1, z - 1) * binom(n - x - 1, y - z - 1)
        + binom(n - 2, x - 1) * binom(x - 1, z) * binom(n - x - 1, y - z - 1)
    )


def q2_indicator_sum(n: int, c) -> int:
    """The four-case sum with explicit case indicators.

    Agrees with :func:`q2` whenever z >= 1. At z = 0 the indicators drop sets
    with x = 1 or y = 1, which never carry a connected component anyway.
    """
    c = _as_class(c)
    _require_valid(c, n)
    x, y, z = c
    m = max(1, z)
    total = 0
    if x >= 2 and y >= 2 and z >= 2:
        total += binom(n - 2, x - 2) * binom(x - 2, z - 2) * binom(n - x, y - z)
    if x > m and y < n:
        total += binom(n - 2, x - 2) * binom(x - 2, z - 1) * binom(n - x, y - z)
    if x < n and y > m:
        total += binom(n - 2, x - 1) * binom(x - 1, z - 1) * binom(n - x - 1, y - z - 1)
    if m < x < n and m < y < n:
        total += binom(n - 2, x - 1) * binom(x - 1, z) * binom(n - x - 1, y - z - 1)
    return total


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num}/{den} is not an integer")
    return q


def _class_denominator(n: int, x: int, y: int, z: int) -> int:
    return factorial(x - z) * factorial(z) * factorial(n - x - y + z) * factorial(y - z)


def _require_closed_range(n: int, c: ClassIndex) -> None:
    _require_valid(c, n)
    if c.z < 1:
        raise ValueError(f"closed forms need x, y >= z >= 1 (got {tuple(c)})")


def q1_closed(n: int, c) -> int:
    c = _as_class(c)
    _require_closed_range(n, c)
    x, y, z = c
    return _exact_div(factorial(n - 2) * x * (x - 1), _class_denominator(n, x, y, z))


def q2_closed(n: int, c) -> int:
    c = _as_class(c)
    _require_closed_range(n, c)
    x, y, z = c
    return _exact_div(factorial(n - 2) * (x * y - z), _class_denominator(n, x, y, z))


def q_enumerated(n: int, c, target: str) -> int:
    """Count qualifying vertex sets by listing them.

    ``target`` is ``"q1_sets"`` (must contain s1 and s_n) or ``"q2_sets"``
    (must contain s1 and s_2n).
    """
    if n > Q_ENUMERATION_CAP:
        raise ValueError(f"q_enumerated is capped at n={Q_ENUMERATION_CAP}")
    if target not in ("q1_sets", "q2_sets"):
        raise ValueError(f"unknown target {target!r}")
    x, y, z = _as_class(c)
    if min(x, y, z) < 0:
        return 0
    base = range(1, n + 1)
    count = 0
    for lower in combinations(base, x):
        if 1 not in lower:
            continue
        if target == "q1_sets" and n not in lower:
            continue
        lower_set = set(lower)
        # Upper vertices are listed by the base index below them.
        for upper in combinations(base, y):
            if target == "q2_sets" and n not in upper:
                continue
            if len(lower_set.intersection(upper)) == z:
                count += 1
    return count


def q(n: int, c, q1_fn=None, q2_fn=None) -> int:
    """Signed, symmetrized difference of q1 and q2; 0 outside the valid range.

    ``q1_fn`` / ``q2_fn`` default to :func:`q1` / :func:`q2` and exist so
    callers can substitute alternative forms.
    """
    c = _as_class(c)
    if not c.is_valid(n):
        return 0
    if q1_fn is None and q2_fn is None:
        x, y, z = c
        d = _q1_raw(n, x, y, z) - _q2_raw(n, x, y, z)
        if x != y:
            d += _q1_raw(n, y, x, z) - _q2_raw(n, y, x, z)
        return d
    f1 = q1 if q1_fn is None else q1_fn
    f2 = q2 if q2_fn is None else q2_fn
    d = f1(n, c) - f2(n, c)
    if c.x != c.y:
        s = c.swapped()
        d += f1(n, s) - f2(n, s)
    return d


def q_closed(n: int, c) -> int:
    """Closed form of q for x, y >= z >= 1 with no indicator functions.

    Off the diagonal q is the two-orientation sum and the numerator is
    x^2 - 2xy + y^2 - x - y + 2z. On the diagonal only one orientation is
    counted, so the value is half of that expression, i.e. the (z - x) form.
    """
    c = _as_class(c)
    _require_closed_range(n, c)
    x, y, z = c
    if x == y:
        return q_diagonal_closed(n, x, z)
    return q_offdiagonal_expression(n, c)


def q_offdiagonal_expression(n: int, c) -> int:
    """x^2 - 2xy + y^2 - x - y + 2z form evaluated at any x, y >= z >= 1.

    Equals q off the diagonal and 2 q on it.
    """
    c = _as_class(c)
    _require_closed_range(n, c)
    x, y, z = c
    num = factorial(n - 2) * (x * x - 2 * x * y + y * y - x - y + 2 * z)
    return _exact_div(num, _class_denominator(n, x, y, z))


def q_diagonal_closed(n: int, x: int, z: int) -> int:
    c = ClassIndex(x, x, z)
    _require_closed_range(n, c)
    num = factorial(n - 2) * (z - x)
    return _exact_div(num, factorial(x - z) ** 2 * factorial(z) * factorial(n - 2 * x + z))


@dataclass(frozen=True)
class NegativityInterval:
    """Real x with q(x, y, z) <= 0: y + (1 -+ sqrt(r)) / 2 with r = 8(y-z) + 1.

    Integer membership is decided exactly via (2(x-y) - 1)^2 <= r.
    """

    y: int
    z: int
    radicand: int

    @property
    def lo(self) -> float:
        return self.y + (1 - math.sqrt(self.radicand)) / 2

    @property
    def hi(self) -> float:
        return self.y + (1 + math.sqrt(self.radicand)) / 2

    def contains(self, x: int) -> bool:
        return (2 * (x - self.y) - 1) ** 2 <= self.radicand

    def on_boundary(self, x: int) -> bool:
        return (2 * (x - self.y) - 1) ** 2 == self.radicand


def q_negativity_interval(y: int, z: int) -> NegativityInterval:
    r = 8 * y - 8 * z + 1
    if r < 0:
        raise ValueError(f"8y-8z+1 = {r} < 0; need y >= z")
    if not y >= z >= 1:
        raise ValueError(f"need y >= z >= 1 (got y={y}, z={z})")
    return NegativityInterval(y, z, r)


def outside_edges(n: int, c) -> int:
    """Edges of the bunkbed graph of K_n with both endpoints outside a class-c set."""
    c = _as_class(c)
    _require_valid(c, n)
    x, y, z = c
    return n * (n - x - y) + (x * x - x + y * y - y) // 2 + z


def lemma_sums(n: int, k: int, z: int, start: int = 0, q_fn=None) -> tuple[int, int]:
    """(sum_i q(k+i, k-i, z), sum_i q(k+i+1, k-i, z)) for i = start..k-z.

    Both vanish for ``start=0`` whenever n is large enough for every summand
    to be a valid class.
    """
    if k < z:
        raise ValueError(f"need k >= z (got k={k}, z={z})")
    f = q if q_fn is None else q_fn
    even = sum(f(n, ClassIndex(k + i, k - i, z)) for i in range(start, k - z + 1))
    odd = sum(f(n, ClassIndex(k + i + 1, k - i, z)) for i in range(start, k - z + 1))
    return even, odd
