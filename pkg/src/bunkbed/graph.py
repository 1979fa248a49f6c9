"""The bunkbed graph of K_n and exhaustive percolation over it.

Vertices are labelled 1..2n: 1..n is the lower level, n+1..2n the upper one,
and vertex i sits directly below vertex i+n. Edges carry a fixed bit position
(lower clique, then upper clique, then verticals, each in lexicographic order)
so that masks, census files and golden values are reproducible bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import TYPE_CHECKING, Iterable

import numpy as np

from . import _kernels
from .counting import ClassIndex
from .errors import CapExceededError

if TYPE_CHECKING:
    from .decomposition import DyadicProbability

DEFAULT_ENUMERATION_CAP = 5


@dataclass(frozen=True)
class BunkbedGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    edge_index: dict[tuple[int, int], int] = field(compare=False, repr=False)

    @property
    def vertices(self) -> range:
        return range(1, 2 * self.n + 1)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based endpoint arrays, in bit order, for the compiled kernels."""
        eu = np.array([a - 1 for a, _ in self.edges], dtype=np.int64)
        ev = np.array([b - 1 for _, b in self.edges], dtype=np.int64)
        return eu, ev

    def check_vertex(self, v: int) -> None:
        if not 1 <= v <= 2 * self.n:
            raise ValueError(f"vertex {v} outside 1..{2 * self.n}")


def build_bunkbed(n: int) -> BunkbedGraph:
    if n < 2:
        raise ValueError(f"n must be at least 2 (got {n}); s1 and s_n must differ")
    lower = list(combinations(range(1, n + 1), 2))
    upper = [(a + n, b + n) for a, b in lower]
    vertical = [(i, i + n) for i in range(1, n + 1)]
    edges = tuple(lower + upper + vertical)
    return BunkbedGraph(n, edges, {e: k for k, e in enumerate(edges)})


@dataclass(frozen=True)
class ConfigMask:
    """One open/closed assignment; bit k set iff edge k is open."""

    bits: int
    width: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError(f"mask {self.bits:#x} does not fit in {self.width} bits")

    @classmethod
    def for_graph(cls, graph: BunkbedGraph, bits: int = 0) -> ConfigMask:
        return cls(bits, graph.num_edges)

    @classmethod
    def from_edges(cls, graph: BunkbedGraph, open_edges: Iterable[tuple[int, int]]) -> ConfigMask:
        bits = 0
        for a, b in open_edges:
            key = (min(a, b), max(a, b))
            if key not in graph.edge_index:
                raise ValueError(f"{key} is not an edge of the bunkbed graph of K_{graph.n}")
            bits |= 1 << graph.edge_index[key]
        return cls(bits, graph.num_edges)

    @classmethod
    def from_hex(cls, text: str, width: int) -> ConfigMask:
        return cls(int(text, 16), width)

    def to_hex(self) -> str:
        return format(self.bits, "x")

    def is_open(self, k: int) -> bool:
        return bool(self.bits >> k & 1)

    def open_count(self) -> int:
        return bin(self.bits).count("1")


def _check_mask(graph: BunkbedGraph, mask: ConfigMask) -> None:
    if mask.width != graph.num_edges:
        raise ValueError(f"mask width {mask.width} does not match {graph.num_edges} edges")


def _reachable(graph: BunkbedGraph, mask: ConfigMask, source: int) -> frozenset[int]:
    adj: dict[int, list[int]] = {v: [] for v in graph.vertices}
    for k, (a, b) in enumerate(graph.edges):
        if mask.is_open(k):
            adj[a].append(b)
            adj[b].append(a)
    seen = {source}
    stack = [source]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def connected(graph: BunkbedGraph, mask: ConfigMask, u: int, v: int) -> bool:
    graph.check_vertex(u)
    graph.check_vertex(v)
    _check_mask(graph, mask)
    return u == v or v in _reachable(graph, mask, u)


def classify(n: int, vertex_set: Iterable[int]) -> ClassIndex:
    vs = set(vertex_set)
    x = sum(1 for v in vs if v <= n)
    y = len(vs) - x
    z = sum(1 for i in range(1, n + 1) if i in vs and i + n in vs)
    return ClassIndex(x, y, z)


@dataclass(frozen=True)
class ComponentDescriptor:
    vertex_set: frozenset[int]
    cls: ClassIndex


def main_component(graph: BunkbedGraph, mask: ConfigMask, source: int = 1) -> ComponentDescriptor:
    graph.check_vertex(source)
    _check_mask(graph, mask)
    vs = _reachable(graph, mask, source)
    return ComponentDescriptor(vs, classify(graph.n, vs))


def main_component_bits(graph: BunkbedGraph, masks: np.ndarray, source: int = 1) -> np.ndarray:
    """Batched :func:`main_component`: vertex bitsets (bit v-1 for vertex v)."""
    graph.check_vertex(source)
    if graph.num_edges > 62:
        raise ValueError("batched masks are int64; n must be at most 7")
    eu, ev = graph.endpoint_arrays()
    return _kernels.component_bits(eu, ev, 2 * graph.n, source - 1, np.asarray(masks, dtype=np.int64))


def outside_edges_direct(graph: BunkbedGraph, vertex_set: Iterable[int]) -> int:
    """Edges with neither endpoint in ``vertex_set``.

    Boundary edges (exactly one endpoint inside) are not counted: given the
    component they are forced closed.
    """
    vs = set(vertex_set)
    for v in vs:
        graph.check_vertex(v)
    return sum(1 for a, b in graph.edges if a not in vs and b not in vs)


@dataclass(frozen=True)
class CensusResult:
    n: int
    u: int
    v: int
    total_configs: int
    hit_histogram: tuple[int, ...]

    @property
    def hits(self) -> int:
        return sum(self.hit_histogram)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "u": self.u,
            "v": self.v,
            "total": str(self.total_configs),
            "histogram": [str(c) for c in self.hit_histogram],
        })

    @classmethod
    def from_json(cls, text: str) -> CensusResult:
        d = json.loads(text)
        return cls(d["n"], d["u"], d["v"], int(d["total"]), tuple(int(c) for c in d["histogram"]))


def check_enumeration_cap(n: int, cap: int | None) -> None:
    cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(
            f"exhaustive enumeration of 2^{n * n} configurations for n={n} exceeds the "
            f"enumeration cap n<={cap}; raise the cap explicitly or use Monte Carlo"
        )


def brute_force_census(graph: BunkbedGraph, u: int, v: int, cap: int | None = None) -> CensusResult:
    graph.check_vertex(u)
    graph.check_vertex(v)
    check_enumeration_cap(graph.n, cap)
    m = graph.num_edges
    eu, ev = graph.endpoint_arrays()
    hist = _kernels.subset_histogram(eu, ev, 2 * graph.n, u - 1, v - 1, False, 0, 1 << m)
    return CensusResult(graph.n, u, v, 1 << m, tuple(int(c) for c in hist))


def census_python(graph: BunkbedGraph, u: int, v: int, via_component: bool = False) -> CensusResult:
    """Pure-Python census, either by pairwise connectivity or by main component.

    Only meant for small n (it visits every mask in the interpreter); it is the
    cross-check for the compiled census.
    """
    m = graph.num_edges
    hist = [0] * (m + 1)
    for bits in range(1 << m):
        mask = ConfigMask(bits, m)
        if via_component:
            hit = v in main_component(graph, mask, u).vertex_set
        else:
            hit = connected(graph, mask, u, v)
        if hit:
            hist[mask.open_count()] += 1
    return CensusResult(graph.n, u, v, 1 << m, tuple(hist))


def target_vertex(n: int, target: str) -> int:
    if target == "same_level":
        return n
    if target == "cross_level":
        return 2 * n
    raise ValueError(f"unknown target {target!r}; expected 'same_level' or 'cross_level'")


def exact_prob_bruteforce(n: int, target: str, cap: int | None = None) -> DyadicProbability:
    """P(s1 <-> s_n) or P(s1 <-> s_2n) at p=1/2 by visiting every configuration."""
    from .decomposition import DyadicProbability

    graph = build_bunkbed(n)
    census = brute_force_census(graph, 1, target_vertex(n, target), cap)
    return DyadicProbability(census.hits, graph.num_edges)


def histogram_bounds_ok(census: CensusResult) -> bool:
    m = len(census.hit_histogram) - 1
    return census.hits <= census.total_configs and all(
        c <= comb(m, k) for k, c in enumerate(census.hit_histogram)
    )
