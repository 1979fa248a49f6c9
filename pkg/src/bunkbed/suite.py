"""Batch verification of the counting identities behind the decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .counting import (
    ClassIndex,
    gc,
    gc_asymptotic_check,
    gc_bounds,
    gc_bruteforce,
    lemma1_comparisons,
    lemma_sums,
    q,
    q1,
    q1_closed,
    q2,
    q2_closed,
    q2_indicator_sum,
    q_closed,
    q_enumerated,
    q_negativity_interval,
    verify_lemma1,
    BRUTEFORCE_EDGE_CAP,
)


@dataclass
class CheckResult:
    name: str
    label: str
    cases: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_telescoping(k_max: int, q_fn: Callable | None = None) -> CheckResult:
    res = CheckResult("telescoping_sums", "zero-sum of q along x+y=2k and x+y=2k+1")
    for k in range(1, k_max + 1):
        n = 2 * k + 1
        for z in range(1, k + 1):
            res.cases += 1
            even, odd = lemma_sums(n, k, z, q_fn=q_fn)
            if even or odd:
                res.violations.append(f"k={k} z={z} n={n}: sums ({even}, {odd})")
    return res


def check_gc_monotonicity(size_cap: int, z_cap: int | None = None) -> CheckResult:
    res = CheckResult("gc_monotonicity", "gc grows with |x-y| at fixed x+y and z")
    found = verify_lemma1(size_cap, z_cap)
    res.cases = sum(1 for _ in lemma1_comparisons(size_cap, z_cap))
    res.violations = [str(v) for v in found]
    return res


def check_gc_oracle(edge_cap: int = BRUTEFORCE_EDGE_CAP) -> CheckResult:
    res = CheckResult("gc_oracle", "gc recurrence equals brute-force enumeration")
    for x in range(edge_cap + 2):
        for y in range(x + 1):
            for z in range(y + 1):
                c = ClassIndex(x, y, z)
                if c.num_edges > edge_cap:
                    continue
                res.cases += 1
                got, want = gc(c), gc_bruteforce(c)
                if got != want:
                    res.violations.append(f"gc{tuple(c)}: recurrence {got} != brute force {want}")
    return res


def check_gc_bounds(size: int = 12) -> CheckResult:
    res = CheckResult("gc_bounds", "lower <= gc <= upper for z >= 1")
    for x in range(1, size + 1):
        for y in range(1, size + 1):
            for z in range(1, min(x, y) + 1):
                res.cases += 1
                lo, hi = gc_bounds((x, y, z))
                g = gc((x, y, z))
                if not lo <= g <= hi:
                    res.violations.append(f"gc{(x, y, z)}={g} outside [{lo}, {hi}]")
    return res


def check_gc_asymptotic(lo: int = 7, hi: int = 40) -> CheckResult:
    res = CheckResult("gc_asymptotic", "gc(m,0,0) >= 2^C(m,2) (1 - 3m 2^-m)")
    for m in range(lo, hi + 1):
        res.cases += 1
        if not gc_asymptotic_check(m):
            res.violations.append(f"m={m}")
    return res


def check_q_oracle(n_max: int = 9, q_fn: Callable | None = None) -> CheckResult:
    res = CheckResult("q_oracle", "q1, q2 equal vertex-set enumeration; closed forms match")
    for n in range(2, n_max + 1):
        for x in range(n + 1):
            for y in range(n + 1):
                for z in range(min(x, y) + 1):
                    c = ClassIndex(x, y, z)
                    if not c.is_valid(n):
                        continue
                    res.cases += 1
                    pairs = [("q1", q1(n, c), q_enumerated(n, c, "q1_sets")),
                             ("q2", q2(n, c), q_enumerated(n, c, "q2_sets"))]
                    if z >= 1:
                        pairs += [("q1 closed", q1(n, c), q1_closed(n, c)),
                                  ("q2 closed", q2(n, c), q2_closed(n, c)),
                                  ("q2 indicators", q2(n, c), q2_indicator_sum(n, c)),
                                  ("q closed", (q_fn or q)(n, c), q_closed(n, c))]
                    for name, a, b in pairs:
                        if a != b:
                            res.violations.append(f"{name} n={n} {tuple(c)}: {a} != {b}")
    return res


def check_q_sign(y_max: int = 12, q_fn: Callable | None = None) -> CheckResult:
    res = CheckResult("q_sign", "sign of q matches the negativity interval")
    f = q_fn or q
    for y in range(1, y_max + 1):
        for z in range(1, y + 1):
            interval = q_negativity_interval(y, z)
            for x in range(z, 3 * y_max + 2):
                n = x + y - z
                res.cases += 1
                value = f(n, (x, y, z))
                if (value <= 0) != interval.contains(x):
                    res.violations.append(f"q{(x, y, z)} at n={n} is {value}; interval says "
                                          f"{'<= 0' if interval.contains(x) else '> 0'}")
    return res


def run_lemma_suite(k_max: int = 150, size_cap: int = 9, *, z_cap: int | None = None,
                    q_oracle_n: int = 9, gc_edge_cap: int = BRUTEFORCE_EDGE_CAP,
                    bounds_size: int = 12, q_fn: Callable | None = None) -> list[CheckResult]:
    """Run every identity check; ``q_fn`` swaps in an alternative q (negative controls)."""
    return [
        check_telescoping(k_max, q_fn),
        check_gc_monotonicity(size_cap, z_cap),
        check_q_oracle(q_oracle_n, q_fn),
        check_q_sign(bounds_size, q_fn),
        check_gc_oracle(gc_edge_cap),
        check_gc_bounds(bounds_size),
        check_gc_asymptotic(),
    ]
