import itertools

import networkx as nx
import pytest


def nx_census_hits(n, u, v):
    """Configurations of the bunkbed graph of K_n joining u and v, via networkx."""
    lower = list(itertools.combinations(range(1, n + 1), 2))
    edges = lower + [(a + n, b + n) for a, b in lower] + [(i, i + n) for i in range(1, n + 1)]
    hits = 0
    for bits in range(1 << len(edges)):
        g = nx.Graph()
        g.add_nodes_from(range(1, 2 * n + 1))
        g.add_edges_from(e for k, e in enumerate(edges) if bits >> k & 1)
        hits += nx.has_path(g, u, v)
    return hits


def nx_connected_spanning(x, y, z):
    nodes = list(range(x + y))
    edges = list(itertools.combinations(range(x), 2))
    edges += [(x + a, x + b) for a, b in itertools.combinations(range(y), 2)]
    edges += [(i, x + i) for i in range(z)]
    count = 0
    for bits in range(1 << len(edges)):
        g = nx.Graph()
        g.add_nodes_from(nodes)
        g.add_edges_from(e for k, e in enumerate(edges) if bits >> k & 1)
        count += (not nodes) or nx.is_connected(g)
    return count


@pytest.fixture(scope="session")
def nx_oracle():
    return {"census": nx_census_hits, "gc": nx_connected_spanning}
