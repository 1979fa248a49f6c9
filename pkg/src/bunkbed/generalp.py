"""Connection probabilities away from p = 1/2.

Small n gets the exact two-terminal reliability polynomial from the
exhaustive census; larger n gets seeded Monte Carlo. Both feed the ratio
report P(s1 <-> s_2n) / P(s1 <-> s_n), which is a numerical check of an open
monotonicity conjecture and is labelled as such everywhere it is printed.

Random streams: numpy's Philox4x64 (counter-based), one stream per index,
keyed by ``SeedSequence(seed).spawn(stream_count)``. Edge k of a trial is open
iff the next raw 64-bit word is below floor(p * 2^64). Trials are dealt to
streams in contiguous blocks, so the hit count depends only on
(seed, trials, stream_count) and never on the thread count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .graph import brute_force_census, build_bunkbed, target_vertex

RATIO_LABEL = "conjecture check (numerical report, not a proof)"
MC_CHUNK = 1 << 14


def as_probability(p) -> Fraction:
    """Exact rational from a decimal string, int, Fraction or float."""
    if isinstance(p, str):
        try:
            value = Fraction(p.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot read probability {p!r}") from exc
    else:
        value = Fraction(p)
    if not 0 <= value <= 1:
        raise ValueError(f"p must lie in [0, 1] (got {p})")
    return value


@dataclass(frozen=True)
class ReliabilityPolynomial:
    n: int
    target: str
    coeffs: tuple[int, ...]

    @property
    def num_edges(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, p) -> Fraction:
        return eval_reliability(self, p)


def reliability_polynomial(n: int, target: str, cap: int | None = None) -> ReliabilityPolynomial:
    graph = build_bunkbed(n)
    census = brute_force_census(graph, 1, target_vertex(n, target), cap)
    return ReliabilityPolynomial(n, target, census.hit_histogram)


def eval_reliability(poly: ReliabilityPolynomial, p) -> Fraction:
    """Exact value of sum_k N_k p^k (1-p)^(m-k)."""
    p = as_probability(p)
    a, b = p.numerator, p.denominator
    m = poly.num_edges
    # With p = a/b every term shares the denominator b^m.
    num = sum(c * a**k * (b - a) ** (m - k) for k, c in enumerate(poly.coeffs) if c)
    return Fraction(num, b**m)


@dataclass(frozen=True)
class McEstimate:
    n: int
    target: str
    p: str
    trials: int
    hits: int
    seed: int
    stream_count: int

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def standard_error(self) -> float:
        est = self.estimate
        return math.sqrt(est * (1 - est) / self.trials)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["estimate"] = self.estimate
        d["standard_error"] = self.standard_error
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _threshold(p: Fraction) -> int:
    return math.floor(p * (1 << 64))


def _stream_hits(seed_seq: np.random.SeedSequence, trials: int, eu, ev, nv: int,
                 u: int, v: int, threshold: int) -> int:
    m = eu.shape[0]
    if threshold >= 1 << 64:
        template = np.ones((1, m), dtype=np.bool_)
        return trials * int(_kernels.count_connected_rows(eu, ev, nv, u, v, template))
    bitgen = np.random.Philox(seed_seq)
    limit = np.uint64(threshold)
    hits = 0
    done = 0
    while done < trials:
        rows = min(MC_CHUNK, trials - done)
        raw = bitgen.random_raw(rows * m).reshape(rows, m)
        hits += int(_kernels.count_connected_rows(eu, ev, nv, u, v, raw < limit))
        done += rows
    return hits


def mc_estimate(n: int, p, target: str, trials: int, seed: int, stream_count: int = 1,
                threads: int | None = None) -> McEstimate:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if stream_count < 1:
        raise ValueError("stream_count must be at least 1")
    prob = as_probability(p)
    graph = build_bunkbed(n)
    eu, ev = graph.endpoint_arrays()
    u, v = 0, target_vertex(n, target) - 1
    children = np.random.SeedSequence(seed).spawn(stream_count)
    base, extra = divmod(trials, stream_count)
    shares = [base + (1 if s < extra else 0) for s in range(stream_count)]
    threshold = _threshold(prob)

    def run(s: int) -> int:
        if shares[s] == 0:
            return 0
        return _stream_hits(children[s], shares[s], eu, ev, 2 * n, u, v, threshold)

    workers = max(1, threads or 1)
    if workers == 1:
        hits = sum(run(s) for s in range(stream_count))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, range(stream_count)))
    return McEstimate(n, target, str(p), trials, hits, seed, stream_count)


def parse_grid(text: str) -> list[Fraction]:
    """``"a:b:step"`` (inclusive) or a comma-separated list, read exactly."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid range must be start:stop:step (got {text!r})")
        start, stop, step = (as_probability(x) if i < 2 else Fraction(x) for i, x in enumerate(parts))
        if step <= 0:
            raise ValueError("grid step must be positive")
        out = []
        p = start
        while p <= stop:
            out.append(p)
            p += step
        return out
    return [as_probability(x) for x in text.split(",") if x.strip()]


def default_grid() -> list[Fraction]:
    return [Fraction(i, 100) for i in range(1, 100)]


@dataclass(frozen=True)
class RatioRow:
    p: Fraction
    p_same: Fraction | float
    p_cross: Fraction | float
    ratio: Fraction | float | None
    nondecreasing: bool | None


@dataclass
class RatioTable:
    n: int
    method: str
    rows: list[RatioRow]
    label: str = RATIO_LABEL

    @property
    def all_nondecreasing(self) -> bool:
        return all(r.nondecreasing is not False for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# {self.label}; n={self.n}; method={self.method}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "p_same", "p_cross", "ratio", "nondecreasing_flag"])
        for r in self.rows:
            w.writerow([
                _fmt(r.p), _fmt(r.p_same), _fmt(r.p_cross),
                "" if r.ratio is None else _fmt(r.ratio),
                "" if r.nondecreasing is None else str(r.nondecreasing).lower(),
            ])
        return buf.getvalue()


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        # Grid points like 1/100 print exactly; long expansions fall back to float.
        d = value.denominator
        for prime in (2, 5):
            while d % prime == 0:
                d //= prime
        if d == 1 and value.denominator <= 10**6:
            return str(Decimal(value.numerator) / Decimal(value.denominator))
    return repr(float(value))


def ratio_report(n: int, grid: Sequence | None = None, method: str = "exact_poly", *,
                 trials: int = 100_000, seed: int = 0, stream_count: int = 1,
                 enum_cap: int | None = None, threads: int | None = None) -> RatioTable:
    ps = [as_probability(p) for p in (default_grid() if grid is None else grid)]
    if method == "exact_poly":
        same_poly = reliability_polynomial(n, "same_level", enum_cap)
        cross_poly = reliability_polynomial(n, "cross_level", enum_cap)

        def probs(j, p):
            return eval_reliability(same_poly, p), eval_reliability(cross_poly, p)
    elif method == "monte_carlo":
        def probs(j, p):
            # Each grid point and target gets its own seed derived from (seed, j).
            pair = []
            for t, target in enumerate(("same_level", "cross_level")):
                child = int(np.random.SeedSequence([seed, j, t]).generate_state(1)[0])
                pair.append(mc_estimate(n, p, target, trials, child, stream_count, threads).estimate)
            return tuple(pair)
    else:
        raise ValueError(f"unknown method {method!r}; expected 'exact_poly' or 'monte_carlo'")

    rows = []
    prev = None
    for j, p in enumerate(ps):
        same, cross = probs(j, p)
        ratio = None if same == 0 else cross / same
        flag = None if prev is None or ratio is None else ratio >= prev
        rows.append(RatioRow(p, same, cross, ratio, flag))
        if ratio is not None:
            prev = ratio
    return RatioTable(n, method, rows)
