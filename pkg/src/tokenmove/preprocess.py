"""Equivalence-preserving instance transformations.

* :func:`contract` eliminates every vertex outside S∪T, joining its
  neighbours, which leaves a kernel on at most 2k vertices.
* :func:`prune_obstacles` removes obstacles of a contracted digraph that no
  sequence within budget can use.
* :func:`to_max_degree_three` and :func:`subdivide` produce equivalent
  instances of bounded degree / degeneracy.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, MapMismatch, UnsupportedVariant
from .graph import Graph, Instance, Move, MoveSequence


@dataclass(frozen=True)
class ContractionMap:
    kept_vertices: tuple[int, ...]
    # (kernel u, kernel w) -> original path; undirected edges are stored in both orientations
    shortcut_paths: dict
    directed: bool = False

    def original(self, v: int) -> int:
        return self.kept_vertices[v]

    def path_for(self, u: int, w: int) -> tuple[int, ...]:
        try:
            return self.shortcut_paths[(u, w)]
        except KeyError:
            raise MapMismatch(f"kernel edge ({u}, {w}) has no recorded original path") from None

    def shortcuts(self) -> list[tuple[int, int, tuple[int, ...]]]:
        """Edges whose original path is longer than one edge, as sorted triples."""
        out = []
        for (u, w), p in sorted(self.shortcut_paths.items()):
            if len(p) > 2 and (self.directed or u < w):
                out.append((u, w, p))
        return out


def _require_unlabelled(instance: Instance, what: str) -> None:
    if instance.labelled:
        raise UnsupportedVariant(f"{what} applies to unlabelled variants only")


def _with_provenance(inst: Instance, graph, source, target, budget, step) -> Instance:
    return Instance(graph, inst.labelled, source, target, budget, inst.provenance + (step,))


def contract(instance: Instance) -> tuple[Instance, ContractionMap]:
    """Kernel on S∪T with shortcut edges through eliminated vertices.

    Vertices outside S∪T are eliminated in ascending order; each new
    edge records the original path it stands for so that sequences can be
    lifted back exactly.
    """
    _require_unlabelled(instance, "contraction")
    g = instance.graph
    directed = g.directed
    terminals = set(instance.source) | set(instance.target)
    out_n = {u: set(g.adjacency[u]) for u in range(g.vertex_count)}
    in_n = {u: set(g.in_adjacency[u]) for u in range(g.vertex_count)}
    paths = {(u, v): (u, v) for u in range(g.vertex_count) for v in g.adjacency[u]}

    for v in range(g.vertex_count):
        if v in terminals:
            continue
        preds = sorted(in_n[v])
        succs = sorted(out_n[v])
        for a in preds:
            for b in succs:
                if a == b or b in out_n[a]:
                    continue
                p = paths[(a, v)] + paths[(v, b)][1:]
                out_n[a].add(b)
                in_n[b].add(a)
                paths[(a, b)] = p
                if not directed:
                    paths[(b, a)] = p[::-1]
        for a in preds:
            out_n[a].discard(v)
        for b in succs:
            in_n[b].discard(v)
        del out_n[v], in_n[v]

    kept = tuple(sorted(terminals))
    index = {old: new for new, old in enumerate(kept)}
    edges = []
    shortcut = {}
    for u in kept:
        for w in sorted(out_n[u]):
            shortcut[(index[u], index[w])] = paths[(u, w)]
            if directed or u < w:
                edges.append((index[u], index[w]))
    kernel_graph = Graph.from_edges(len(kept), edges, directed)
    kernel = _with_provenance(
        instance,
        kernel_graph,
        [index[v] for v in instance.source],
        [index[v] for v in instance.target],
        instance.budget,
        "contract",
    )
    return kernel, ContractionMap(kept, shortcut, directed)


def _drop_loops(walk: list[int]) -> list[int]:
    """Shortcut a walk into a simple path with the same endpoints."""
    out: list[int] = []
    at: dict[int, int] = {}
    for v in walk:
        if v in at:
            cut = at[v]
            for w in out[cut + 1:]:
                del at[w]
            del out[cut + 1:]
        else:
            at[v] = len(out)
            out.append(v)
    return out


def lift_sequence(cmap: ContractionMap, seq: Iterable[Move]) -> MoveSequence:
    """Translate a kernel sequence into one on the original graph."""
    moves = []
    for m in seq:
        walk = [cmap.original(m.path[0])]
        for a, b in zip(m.path, m.path[1:]):
            walk.extend(cmap.path_for(a, b)[1:])
        path = _drop_loops(walk)
        moves.append(Move(path[0], path[-1], tuple(path), m.label))
    return MoveSequence(moves)


def is_contracted(instance: Instance) -> bool:
    return len(set(instance.source) | set(instance.target)) == instance.graph.vertex_count


def _min_obstacle_counts(adj, n, starts, weight):
    """0/1-weighted search: fewest obstacle vertices on a path from ``starts``.

    Every vertex on the path, endpoints included, contributes its weight.
    """
    inf = float("inf")
    dist = [inf] * n
    dq = deque()
    for s in starts:
        dist[s] = weight[s]
        dq.append(s)
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            nd = dist[u] + weight[v]
            if nd < dist[v]:
                dist[v] = nd
                if weight[v]:
                    dq.append(v)
                else:
                    dq.appendleft(v)
    return dist


def prunable_obstacle(instance: Instance):
    """First obstacle (lowest index) that may be deleted, or None."""
    g = instance.graph
    s, t = set(instance.source), set(instance.target)
    obstacles = s & t
    weight = [1 if v in obstacles else 0 for v in range(g.vertex_count)]
    from_s = _min_obstacle_counts(g.adjacency, g.vertex_count, sorted(s - t), weight)
    to_t = _min_obstacle_counts(g.in_adjacency, g.vertex_count, sorted(t - s), weight)
    bound = instance.budget + 1
    for v in sorted(obstacles):
        a, b = from_s[v], to_t[v]
        if a == float("inf") or b == float("inf"):
            return v
        if a >= bound and b >= bound:
            return v
    return None


def prune_obstacles_with_map(instance: Instance) -> tuple[Instance, tuple[int, ...]]:
    """Like :func:`prune_obstacles`, also returning new-vertex -> input-vertex."""
    if not instance.directed or instance.labelled:
        raise UnsupportedVariant("obstacle pruning is defined for UDTM")
    if not is_contracted(instance):
        raise UnsupportedVariant("obstacle pruning needs a contracted instance")
    kept = list(range(instance.graph.vertex_count))
    current = instance
    while True:
        v = prunable_obstacle(current)
        if v is None:
            break
        keep = [u for u in range(current.graph.vertex_count) if u != v]
        graph, _ = current.graph.induced_subgraph(keep)
        index = {old: new for new, old in enumerate(keep)}
        current = Instance(
            graph,
            False,
            [index[u] for u in current.source if u != v],
            [index[u] for u in current.target if u != v],
            current.budget,
            current.provenance,
        )
        kept = [kept[u] for u in keep]
    current = Instance(
        current.graph, False, current.source, current.target, current.budget,
        instance.provenance + ("prune",),
    )
    return current, tuple(kept)


def prune_obstacles(instance: Instance) -> Instance:
    """Repeatedly delete obstacles no sequence within budget can involve.

    An obstacle goes when it cannot be reached from S∖T, cannot reach T∖S,
    or every such path in both directions carries at least budget+1
    obstacles (the obstacle itself counted).
    """
    return prune_obstacles_with_map(instance)[0]


def to_max_degree_three(instance: Instance) -> tuple[Instance, tuple[int, ...]]:
    """Replace every vertex by an in-path / centre / out-path gadget.

    Returns the new instance and the map original vertex -> central vertex.
    """
    if not instance.directed:
        raise UnsupportedVariant("degree-three transform is defined for digraphs")
    _require_unlabelled(instance, "degree-three transform")
    g = instance.graph
    base = []
    nxt = 0
    for v in range(g.vertex_count):
        base.append(nxt)
        nxt += len(g.in_adjacency[v]) + len(g.adjacency[v]) + 1
    central = tuple(base[v] + len(g.in_adjacency[v]) for v in range(g.vertex_count))
    edges = []
    for v in range(g.vertex_count):
        size = len(g.in_adjacency[v]) + len(g.adjacency[v]) + 1
        edges.extend((base[v] + i, base[v] + i + 1) for i in range(size - 1))
    for x in range(g.vertex_count):
        for i, y in enumerate(g.adjacency[x]):
            out_vertex = central[x] + 1 + i
            in_vertex = base[y] + g.in_adjacency[y].index(x)
            edges.append((out_vertex, in_vertex))
    graph = Graph.from_edges(nxt, edges, True)
    result = _with_provenance(
        instance,
        graph,
        [central[v] for v in instance.source],
        [central[v] for v in instance.target],
        instance.budget,
        "degree3",
    )
    return result, central


def subdivide(instance: Instance, times: int) -> Instance:
    """Replace every edge by a path with ``times`` new internal vertices."""
    _require_unlabelled(instance, "subdivision")
    if times < 1:
        raise InputError("times must be positive")
    g = instance.graph
    n = g.vertex_count
    edges = []
    for u, v in g.edges():
        chain = [u] + list(range(n, n + times)) + [v]
        n += times
        edges.extend(zip(chain, chain[1:]))
    graph = Graph.from_edges(n, edges, g.directed)
    return _with_provenance(
        instance, graph, instance.source, instance.target, instance.budget, f"subdivide:{times}"
    )
