"""Compiled inner loops for exhaustive and sampled connectivity checks.

Every kernel takes the graph as two parallel endpoint arrays (0-based vertex
ids) and works on an explicit union-find forest, so the same code path serves
the bunkbed census, the connected-spanning-subgraph oracle and Monte Carlo.
"""

from __future__ import annotations

import warnings

import numpy as np
from numba import njit, prange

# The fallback threading layer is fine for these kernels.
warnings.filterwarnings("ignore", message="The TBB threading layer")

# Masks per work unit in the parallel census. Chunk boundaries only affect
# scheduling: partial histograms are summed, so the result is the same.
CHUNK = 1 << 16


@njit(cache=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True)
def _mask_hit(eu, ev, nv, mask, u, v, spanning, parent):
    for i in range(nv):
        parent[i] = i
    comps = nv
    for k in range(eu.shape[0]):
        if (mask >> k) & 1:
            ra = _find(parent, eu[k])
            rb = _find(parent, ev[k])
            if ra != rb:
                parent[ra] = rb
                comps -= 1
    if spanning:
        return comps <= 1
    return _find(parent, u) == _find(parent, v)


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(parallel=True, cache=True)
def subset_histogram(eu, ev, nv, u, v, spanning, lo, hi):
    """Histogram, by number of open edges, of masks in [lo, hi) that hit.

    A mask hits when u and v share a component (``spanning=False``) or when
    the whole vertex set is one component (``spanning=True``).
    """
    m = eu.shape[0]
    nchunks = (hi - lo + CHUNK - 1) // CHUNK
    partial = np.zeros((nchunks, m + 1), dtype=np.int64)
    for c in prange(nchunks):
        parent = np.empty(max(nv, 1), dtype=np.int64)
        start = lo + c * CHUNK
        stop = min(hi, start + CHUNK)
        for mask in range(start, stop):
            if _mask_hit(eu, ev, nv, mask, u, v, spanning, parent):
                partial[c, _popcount(mask)] += 1
    out = np.zeros(m + 1, dtype=np.int64)
    for c in range(nchunks):
        for k in range(m + 1):
            out[k] += partial[c, k]
    return out


@njit(nogil=True, cache=True)
def count_connected_rows(eu, ev, nv, u, v, open_edges):
    """Number of rows of the boolean matrix ``open_edges`` joining u and v.

    Serial and GIL-free: Monte Carlo parallelism is across streams.
    """
    hits = 0
    parent = np.empty(nv, dtype=np.int64)
    for t in range(open_edges.shape[0]):
        for i in range(nv):
            parent[i] = i
        for k in range(eu.shape[0]):
            if open_edges[t, k]:
                ra = _find(parent, eu[k])
                rb = _find(parent, ev[k])
                if ra != rb:
                    parent[ra] = rb
        if _find(parent, u) == _find(parent, v):
            hits += 1
    return hits


@njit(cache=True)
def component_bits(eu, ev, nv, source, masks):
    """Vertex bitset of the component of ``source`` for each edge mask."""
    out = np.empty(masks.shape[0], dtype=np.int64)
    parent = np.empty(nv, dtype=np.int64)
    for t in range(masks.shape[0]):
        mask = masks[t]
        for i in range(nv):
            parent[i] = i
        for k in range(eu.shape[0]):
            if (mask >> k) & 1:
                ra = _find(parent, eu[k])
                rb = _find(parent, ev[k])
                if ra != rb:
                    parent[ra] = rb
        root = _find(parent, source)
        bits = 0
        for i in range(nv):
            if _find(parent, i) == root:
                bits |= 1 << i
        out[t] = bits
    return out
