"""Instance generators shared by the test modules."""

import itertools
import random

import networkx as nx

from tokenmove.graph import Graph, Instance


def connected_graphs(max_n):
    """All connected undirected graphs up to isomorphism with 1..max_n vertices."""
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if 1 <= n <= max_n and nx.is_connected(G):
            yield Graph.from_edges(n, list(G.edges()))


def small_digraphs(max_n):
    """All digraphs up to isomorphism with 1..max_n vertices (max_n <= 4 is practical)."""
    for n in range(1, max_n + 1):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        perms = list(itertools.permutations(range(n)))
        seen = set()
        for mask in range(1 << len(pairs)):
            arcs = [p for i, p in enumerate(pairs) if mask >> i & 1]
            canon = min(tuple(sorted((p[a], p[b]) for a, b in arcs)) for p in perms)
            if canon not in seen:
                seen.add(canon)
                yield Graph.from_edges(n, list(canon), True)


def config_pairs(n, k):
    for s in itertools.combinations(range(n), k):
        for t in itertools.combinations(range(n), k):
            yield s, t


def random_graph(rng, n, p, directed=False):
    if directed:
        edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    else:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges, directed)


def random_instance(rng, n_range=(2, 7), k_max=3, ell_max=4, directed=False,
                    labelled=False, p=None):
    n = rng.randint(*n_range)
    prob = rng.choice([0.2, 0.35, 0.5, 0.7]) if p is None else p
    g = random_graph(rng, n, prob, directed)
    k = rng.randint(1, min(k_max, n))
    return Instance(g, labelled, rng.sample(range(n), k), rng.sample(range(n), k),
                    rng.randint(0, ell_max))


def rng(seed):
    return random.Random(seed)
