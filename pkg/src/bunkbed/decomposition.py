"""Exact connection probabilities at p=1/2 through the main component of s1.

Every configuration splits uniquely into the main component of s1 (a vertex
set S of some class (x, y, z)), the edges inside S (a connected spanning
subgraph), the boundary edges of S (all closed), and the edges outside S
(free). Counting each piece gives

    #{omega : s1 <-> t} = sum over classes of 2^O(c) * gc(c) * q_t(c)

where q_t counts the vertex sets of class c that contain both s1 and t.
Grouping classes with equal x + y and folding the mirror image (x, y) onto
(y, x) rewrites the bunkbed gap as a sum of per-group terms, each of which is
checked to be nonnegative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Context
from fractions import Fraction
from typing import NamedTuple

from .counting import ClassIndex, gc, outside_edges, q, q1, q2
from .errors import CapExceededError

DEFAULT_EXACT_CAP = 16
TARGETS = ("same_level", "cross_level")


@dataclass(frozen=True)
class DyadicProbability:
    numerator: int
    exponent: int

    def __post_init__(self):
        if not 0 <= self.numerator <= 1 << self.exponent:
            raise ValueError(f"{self.numerator}/2^{self.exponent} is not a probability")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def to_json(self) -> dict:
        return {"num": str(self.numerator), "exp": self.exponent}


class Gap(NamedTuple):
    """Signed dyadic number numerator / 2^exponent."""

    numerator: int
    exponent: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def approx(self, digits: int = 12) -> str:
        ctx = Context(prec=digits)
        return str(ctx.divide(ctx.create_decimal(self.numerator), ctx.create_decimal(1 << self.exponent)))

    def to_json(self) -> dict:
        return {"num": str(self.numerator), "exp": self.exponent}


@dataclass(frozen=True)
class GroupTerm:
    k: int
    z: int
    family: str
    weighted_sum: int

    def to_json(self) -> dict:
        return {"k": self.k, "z": self.z, "family": self.family, "sum": str(self.weighted_sum)}


def check_exact_cap(n: int, cap: int | None) -> None:
    cap = DEFAULT_EXACT_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(
            f"exact decomposition for n={n} exceeds the exact-mode cap n<={cap}; "
            "raise --exact-cap or estimate with 'bunkbed mc'"
        )


def _check_n(n: int) -> None:
    if n < 2:
        raise ValueError(f"n must be at least 2 (got {n})")


def valid_classes(n: int):
    for x in range(n + 1):
        for y in range(n + 1):
            for z in range(min(x, y) + 1):
                if x + y - z <= n:
                    yield ClassIndex(x, y, z)


def class_terms(n: int, target: str) -> list[tuple[ClassIndex, int]]:
    """Nonzero per-class configuration counts 2^O * gc * q_t."""
    if target == "same_level":
        qt = q1
    elif target == "cross_level":
        qt = q2
    else:
        raise ValueError(f"unknown target {target!r}")
    out = []
    for c in valid_classes(n):
        if c.x < 1:
            continue
        count = qt(n, c)
        if count:
            term = (gc(c) * count) << outside_edges(n, c)
            if term:
                out.append((c, term))
    return out


def exact_prob(n: int, target: str, cap: int | None = None) -> DyadicProbability:
    _check_n(n)
    check_exact_cap(n, cap)
    return DyadicProbability(sum(t for _, t in class_terms(n, target)), n * n)


def bunkbed_gap(n: int, cap: int | None = None) -> Gap:
    same = exact_prob(n, "same_level", cap)
    cross = exact_prob(n, "cross_level", cap)
    return Gap(same.numerator - cross.numerator, n * n)


def family_class(k: int, i: int, z: int, family: str) -> ClassIndex:
    if family == "even":
        return ClassIndex(k + i, k - i, z)
    if family == "odd":
        return ClassIndex(k + i + 1, k - i, z)
    raise ValueError(f"unknown family {family!r}; expected 'even' or 'odd'")


def group_weights(n: int, k: int, z: int, family: str) -> list[tuple[int, int]]:
    """(i, 2^O * gc) along the group, valid classes only."""
    out = []
    for i in range(k + 1):
        c = family_class(k, i, z, family)
        if c.is_valid(n):
            out.append((i, gc(c) << outside_edges(n, c)))
    return out


def group_term(n: int, k: int, z: int, family: str) -> GroupTerm:
    total = 0
    for i in range(k + 1):
        c = family_class(k, i, z, family)
        if c.is_valid(n):
            total += (gc(c) * q(n, c)) << outside_edges(n, c)
    return GroupTerm(k, z, family, total)


def all_group_terms(n: int, cap: int | None = None) -> list[GroupTerm]:
    """One term per (k, z, family) that holds at least one valid class."""
    _check_n(n)
    check_exact_cap(n, cap)
    terms = []
    for k in range(n + 1):
        for z in range(k + 1):
            for family, size in (("even", 2 * k), ("odd", 2 * k + 1)):
                if size - z <= n:
                    terms.append(group_term(n, k, z, family))
    return terms


@dataclass
class TheoremReport:
    n: int
    p_same: DyadicProbability
    p_cross: DyadicProbability
    gap: Gap
    groups: list[GroupTerm]
    residual: int
    bruteforce_match: bool | None = None
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def first_failure(self) -> str | None:
        return next((name for name, ok in self.checks if not ok), None)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p_same": self.p_same.to_json(),
            "p_cross": self.p_cross.to_json(),
            "gap": self.gap.to_json(),
            "groups": [g.to_json() for g in self.groups],
            "residual": str(self.residual),
            "bruteforce_match": self.bruteforce_match,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def verify_theorem(n: int, with_bruteforce: bool = False, *, enum_cap: int | None = None,
                   exact_cap: int | None = None) -> TheoremReport:
    _check_n(n)
    check_exact_cap(n, exact_cap)
    if with_bruteforce:
        from .graph import check_enumeration_cap
        check_enumeration_cap(n, enum_cap)

    p_same = exact_prob(n, "same_level", exact_cap)
    p_cross = exact_prob(n, "cross_level", exact_cap)
    gap = Gap(p_same.numerator - p_cross.numerator, n * n)
    groups = all_group_terms(n, exact_cap)
    residual = sum(g.weighted_sum for g in groups) - gap.numerator

    report = TheoremReport(n, p_same, p_cross, gap, groups, residual)
    report.checks.append(("gap >= 0", gap.numerator >= 0))
    report.checks.append(("regrouping residual == 0", residual == 0))
    negative = [g for g in groups if g.weighted_sum < 0]
    report.checks.append(("every group term >= 0", not negative))

    if with_bruteforce:
        from .graph import exact_prob_bruteforce
        bf_same = exact_prob_bruteforce(n, "same_level", enum_cap)
        bf_cross = exact_prob_bruteforce(n, "cross_level", enum_cap)
        report.bruteforce_match = bf_same == p_same and bf_cross == p_cross
        report.checks.append(("brute-force match", report.bruteforce_match))
    return report
