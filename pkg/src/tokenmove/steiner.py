"""Minimum Steiner trees by the Dreyfus-Wagner dynamic program (unit weights)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InputError, UnsupportedVariant
from .graph import Graph


@dataclass(frozen=True)
class SteinerResult:
    tree_vertices: frozenset
    tree_edges: frozenset  # (min, max) pairs
    size: int


def _bfs(adj, src):
    dist = {src: 0}
    parent = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                parent[v] = u
                queue.append(v)
    return dist, parent


def min_steiner_tree(graph: Graph, terminals: Iterable[int]) -> Optional[SteinerResult]:
    """Tree with the fewest vertices spanning ``terminals``; None if disconnected."""
    if graph.directed:
        raise UnsupportedVariant("Steiner trees are computed on undirected graphs")
    terms = sorted(set(terminals))
    if not terms:
        raise InputError("terminal set is empty")
    for t in terms:
        graph.check_vertex(t)
    adj = graph.adjacency

    dist0, _ = _bfs(adj, terms[0])
    if any(t not in dist0 for t in terms):
        return None
    if len(terms) == 1:
        return SteinerResult(frozenset(terms), frozenset(), 1)

    # the component of the terminals is all that matters
    comp = sorted(dist0)
    bfs = {v: _bfs(adj, v) for v in comp}
    inf = float("inf")
    m = len(terms)
    full = (1 << m) - 1
    # dp[mask][v]: fewest edges in a tree containing terminals in mask and v
    dp = [None] * (full + 1)
    # back[mask][v]: ("leaf",) | ("split", sub) | ("walk", u, split-at-u or None)
    back = [None] * (full + 1)
    for i, t in enumerate(terms):
        mask = 1 << i
        dist_t = bfs[t][0]
        dp[mask] = {v: dist_t[v] for v in comp}
        back[mask] = {v: ("walk", t, None) if v != t else ("leaf",) for v in comp}

    for mask in range(1, full + 1):
        if dp[mask] is not None:
            continue
        low = mask & -mask
        best = {}
        split = {}
        for v in comp:
            b, c = inf, None
            sub = (mask - 1) & mask
            while sub:
                if sub & low:
                    val = dp[sub][v] + dp[mask ^ sub][v]
                    if val < b:
                        b, c = val, sub
                sub = (sub - 1) & mask
            best[v] = b
            split[v] = c
        # a tree for mask may also be a split tree at u extended by a path u..v
        final = {}
        how = {}
        for v in comp:
            dv = bfs[v][0]
            b, c = best[v], ("split", split[v])
            for u in comp:
                val = best[u] + dv[u]
                if val < b:
                    b, c = val, ("walk", u, split[u])
            final[v] = b
            how[v] = c
        dp[mask] = final
        back[mask] = how

    root = min(comp, key=lambda v: (dp[full][v], v))
    edges = set()

    def add_path(a, b):
        parent = bfs[a][1]
        v = b
        while parent[v] is not None:
            p = parent[v]
            edges.add((min(p, v), max(p, v)))
            v = p

    stack = [(full, root)]
    while stack:
        mask, v = stack.pop()
        c = back[mask][v]
        if c[0] == "leaf":
            continue
        if c[0] == "walk":
            _, u, sub = c
            add_path(u, v)
            if sub is None:
                continue
            v = u
        else:
            sub = c[1]
        stack.append((sub, v))
        stack.append((mask ^ sub, v))

    vertices = set(terms)
    for a, b in edges:
        vertices.update((a, b))
    tree_edges = _spanning_tree(vertices, edges)
    tree_edges = _prune_leaves(tree_edges, set(terms))
    tree_vertices = set(terms)
    for a, b in tree_edges:
        tree_vertices.update((a, b))
    return SteinerResult(frozenset(tree_vertices), frozenset(tree_edges), len(tree_vertices))


def _spanning_tree(vertices, edges):
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = set()
    for a, b in sorted(edges):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            out.add((a, b))
    return out


def _prune_leaves(edges, terminals):
    edges = set(edges)
    while True:
        deg = {}
        for a, b in edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        drop = {e for e in edges if (deg[e[0]] == 1 and e[0] not in terminals)
                or (deg[e[1]] == 1 and e[1] not in terminals)}
        if not drop:
            return edges
        edges -= drop


def brute_force_steiner_size(graph: Graph, terminals: Iterable[int]) -> Optional[int]:
    """Fewest vertices of a connected vertex set containing all terminals."""
    terms = set(terminals)
    n = graph.vertex_count
    best = None
    tmask = sum(1 << t for t in terms)
    for mask in range(1 << n):
        if mask & tmask != tmask:
            continue
        size = bin(mask).count("1")
        if best is not None and size >= best:
            continue
        start = (mask & -mask).bit_length() - 1
        seen = 1 << start
        stack = [start]
        while stack:
            u = stack.pop()
            for v in graph.adjacency[u]:
                bit = 1 << v
                if mask & bit and not seen & bit:
                    seen |= bit
                    stack.append(v)
        if seen == mask:
            best = size
    return best
