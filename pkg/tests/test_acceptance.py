"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even under
capture) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import contextlib
import functools
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from bunkbed.counting import ClassIndex, outside_edges
from bunkbed.decomposition import all_group_terms, bunkbed_gap, exact_prob
from bunkbed.generalp import eval_reliability, mc_estimate, reliability_polynomial
from bunkbed.graph import build_bunkbed, classify, exact_prob_bruteforce, outside_edges_direct
from bunkbed.suite import (
    check_gc_asymptotic,
    check_gc_bounds,
    check_gc_monotonicity,
    check_gc_oracle,
    check_q_oracle,
    check_q_sign,
    check_telescoping,
)

TARGETS = ("same_level", "cross_level")

_capture = None


def report(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ctx = _capture.disabled() if _capture is not None else contextlib.nullcontext()
    with ctx:
        print(line, flush=True)


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _capture
    _capture = capsys
    yield
    _capture = None


@functools.lru_cache(maxsize=None)
def _poly(n: int, target: str):
    return reliability_polynomial(n, target)


def test_criterion_1_exact_oracle():
    start = time.perf_counter()
    bad = []
    for n in (2, 3, 4, 5):
        for target in TARGETS:
            decomposed = exact_prob(n, target)
            enumerated = exact_prob_bruteforce(n, target)
            if decomposed != enumerated:
                bad.append(f"n={n} {target}: {decomposed} vs {enumerated}")
    anchor = (exact_prob(2, "same_level").value, exact_prob(2, "cross_level").value)
    ok = not bad and anchor == (Fraction(9, 16), Fraction(7, 16))
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 600
    report(1, ok, f"exact_prob == brute force for n=2..5, n=2 gives {anchor[0]}, {anchor[1]} "
                  f"({elapsed:.1f}s){'; ' + '; '.join(bad) if bad else ''}")
    assert ok


def test_criterion_2_theorem_instances():
    start = time.perf_counter()
    bad = []
    for n in range(2, 17):
        gap = bunkbed_gap(n)
        if gap.numerator < 0:
            bad.append(f"gap n={n} is {gap.value}")
        bad += [f"n={n} group {(t.k, t.z, t.family)} = {t.weighted_sum}"
                for t in all_group_terms(n) if t.weighted_sum < 0]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 600
    report(2, ok, f"gap >= 0 and every group term >= 0 for n=2..16 ({elapsed:.1f}s)"
                  f"{'; ' + '; '.join(bad[:5]) if bad else ''}")
    assert ok


def test_criterion_3_regrouping_residual():
    residuals = {n: sum(t.weighted_sum for t in all_group_terms(n)) - bunkbed_gap(n).numerator
                 for n in range(2, 17)}
    bad = {n: r for n, r in residuals.items() if r}
    report(3, not bad, f"sum of group terms == 2^(n^2) * gap for n=2..16{'; ' + str(bad) if bad else ''}")
    assert not bad


def test_criterion_4_lemma_sums():
    start = time.perf_counter()
    res = check_telescoping(150)
    elapsed = time.perf_counter() - start
    ok = res.passed and elapsed < 60
    report(4, ok, f"lemma_sums == (0, 0) on {res.cases} pairs 1<=z<=k<=150 ({elapsed:.1f}s)"
                  f"{'; ' + '; '.join(res.violations[:5]) if res.violations else ''}")
    assert ok


def test_criterion_5_gc_monotonicity():
    res = check_gc_monotonicity(9)
    report(5, res.passed, f"gc(x+1,y,z) >= gc(x,y+1,z) for z<=y<x<=9, {res.cases} comparisons, "
                          f"{len(res.violations)} violations")
    assert res.passed


def test_criterion_6_gc_correctness():
    checks = [check_gc_oracle(20), check_gc_bounds(12), check_gc_asymptotic(7, 40)]
    ok = all(c.passed for c in checks)
    detail = ", ".join(f"{c.name} {c.cases} cases {len(c.violations)} violations" for c in checks)
    report(6, ok, detail)
    assert ok


def test_criterion_7_q_functions():
    checks = [check_q_oracle(9), check_q_sign(12)]
    ok = all(c.passed for c in checks)
    detail = ", ".join(f"{c.name} {c.cases} cases {len(c.violations)} violations" for c in checks)
    report(7, ok, detail)
    assert ok


def _bit_counts(n: int, subsets: np.ndarray, edges) -> tuple[np.ndarray, ...]:
    x = np.zeros_like(subsets)
    y = np.zeros_like(subsets)
    z = np.zeros_like(subsets)
    for i in range(n):
        lo = subsets >> i & 1
        up = subsets >> (i + n) & 1
        x += lo
        y += up
        z += lo & up
    direct = np.zeros_like(subsets)
    for a, b in edges:
        direct += (1 - (subsets >> (a - 1) & 1)) * (1 - (subsets >> (b - 1) & 1))
    return x, y, z, direct


def test_criterion_8_outside_edges():
    bad = []
    exhaustive = 0
    for n in range(2, 6):
        g = build_bunkbed(n)
        for bits in range(1 << (2 * n)):
            vs = [v for v in g.vertices if bits >> (v - 1) & 1]
            exhaustive += 1
            if outside_edges(n, classify(n, vs)) != outside_edges_direct(g, vs):
                bad.append(f"n={n} set {vs}")

    n = 6
    g = build_bunkbed(n)
    samples = np.random.default_rng(6_000_006).integers(0, 1 << (2 * n), size=1_000_000, dtype=np.int64)
    x, y, z, direct = _bit_counts(n, samples, g.edges)
    table = {}
    for key in set(zip(x.tolist(), y.tolist(), z.tolist())):
        table[key] = outside_edges(n, ClassIndex(*key))
    formula = np.array([table[k] for k in zip(x.tolist(), y.tolist(), z.tolist())], dtype=np.int64)
    sample_bad = int(np.count_nonzero(formula != direct))
    if sample_bad:
        bad.append(f"{sample_bad} sampled n=6 mismatches")

    identity_cases = 0
    for x0 in range(13):
        for y0 in range(13):
            for z0 in range(min(x0, y0) + 1):
                m = x0 + y0 - z0 + 1
                identity_cases += 1
                if outside_edges(m, (x0, y0, z0)) != outside_edges(m, (y0, x0, z0)):
                    bad.append(f"symmetry {(x0, y0, z0)}")
                if outside_edges(m, (x0 + 1, y0, z0)) - outside_edges(m, (x0, y0 + 1, z0)) != x0 - y0:
                    bad.append(f"step {(x0, y0, z0)}")
    ok = not bad
    report(8, ok, f"O formula on {exhaustive} subsets (n<=5), {samples.size} samples (n=6), "
                  f"{identity_cases} identity cases{'; ' + '; '.join(bad[:5]) if bad else ''}")
    assert ok


def test_criterion_9_general_p():
    bad = []
    for n in range(2, 6):
        for target in TARGETS:
            if eval_reliability(_poly(n, target), Fraction(1, 2)) != exact_prob(n, target).value:
                bad.append(f"poly(1/2) n={n} {target}")
        same, cross = _poly(n, "same_level"), _poly(n, "cross_level")
        if cross(1) / same(1) != 1:
            bad.append(f"ratio(1) n={n}")
        if cross(Fraction(1, 2)) / same(Fraction(1, 2)) > 1:
            bad.append(f"ratio(1/2) n={n}")

    exact = float(exact_prob(4, "same_level").value)
    within = 0
    for run in range(100):
        est = mc_estimate(4, "1/2", "same_level", 100_000, seed=run)
        within += abs(est.estimate - exact) <= 2 * est.standard_error
    if within < 95:
        bad.append(f"MC calibration {within}/100")
    ok = not bad
    report(9, ok, f"poly(1/2) exact for n<=5, ratio(1)=1, ratio(1/2)<=1, MC within 2 SE in {within}/100 runs"
                  f"{'; ' + '; '.join(bad) if bad else ''}")
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
