import itertools

import networkx as nx
import pytest

from tokenmove.errors import InputError, UnsupportedVariant
from tokenmove.graph import Graph
from tokenmove.steiner import brute_force_steiner_size, min_steiner_tree

from instances import rng


def _reference(G, terms):
    terms = set(terms)
    others = [v for v in G.nodes if v not in terms]
    for extra in range(len(others) + 1):
        for add in itertools.combinations(others, extra):
            if nx.is_connected(G.subgraph(terms | set(add))):
                return len(terms) + extra
    return None


def test_examples():
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    single = min_steiner_tree(p3, [1])
    assert (single.size, single.tree_edges) == (1, frozenset())
    assert min_steiner_tree(p3, [0, 2]).size == 3
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert min_steiner_tree(star, [1, 2, 3]).tree_vertices == {0, 1, 2, 3}
    assert _reference(nx.star_graph(3), [1, 2, 3]) == 4


def test_disconnected_terminals_give_none():
    assert min_steiner_tree(Graph.from_edges(3, [(0, 1)]), [0, 2]) is None


def test_errors():
    with pytest.raises(UnsupportedVariant):
        min_steiner_tree(Graph.from_edges(2, [(0, 1)], True), [0, 1])
    with pytest.raises(InputError):
        min_steiner_tree(Graph.from_edges(2, [(0, 1)]), [0, 5])


def test_random_graphs_match_reference_and_are_trees():
    r = rng(13)
    for _ in range(400):
        n = r.randint(1, 9)
        G = nx.gnp_random_graph(n, r.random(), seed=r.randrange(1 << 30))
        g = Graph.from_edges(n, list(G.edges()))
        terms = r.sample(range(n), r.randint(1, min(4, n)))
        res = min_steiner_tree(g, terms)
        ref = _reference(G, terms)
        assert (None if res is None else res.size) == ref
        assert brute_force_steiner_size(g, terms) == ref
        if res is None:
            continue
        tree = nx.Graph(list(res.tree_edges))
        tree.add_nodes_from(res.tree_vertices)
        assert nx.is_tree(tree) and set(terms) <= res.tree_vertices
        assert all(tree.degree(v) != 1 or v in terms for v in tree)
        assert all(G.has_edge(u, v) for u, v in res.tree_edges)


def test_monotone_in_terminals():
    r = rng(17)
    for _ in range(200):
        n = r.randint(2, 9)
        G = nx.connected_watts_strogatz_graph(n, 2, 0.4, seed=r.randrange(1 << 30)) if n > 2 else nx.path_graph(n)
        g = Graph.from_edges(n, list(G.edges()))
        terms = r.sample(range(n), r.randint(1, min(3, n - 1)))
        extra = r.choice([v for v in range(n) if v not in terms])
        assert min_steiner_tree(g, terms).size <= min_steiner_tree(g, terms + [extra]).size


def test_deterministic_witness():
    g = Graph.from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)])
    assert min_steiner_tree(g, [0, 3]) == min_steiner_tree(g, [3, 0])
