"""Graphs, configurations, moves and sequence verification.

Vertices are dense integers ``0..n-1``.  A configuration is a tuple of
distinct vertices; in labelled variants position ``i`` holds the token with
label ``i``, in unlabelled variants only the set matters.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import InputError, MoveError

VARIANTS = {
    # name: (directed, labelled)
    "UUTM": (False, False),
    "UDTM": (True, False),
    "LUTM": (False, True),
    "LDTM": (True, True),
}


def variant_name(directed: bool, labelled: bool) -> str:
    return ("L" if labelled else "U") + ("D" if directed else "U") + "TM"


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    directed: bool
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InputError("negative vertex count")
        if len(self.adjacency) != self.vertex_count:
            raise InputError("adjacency length does not match vertex count")
        for u, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs):
                raise InputError(f"duplicate edge at vertex {u}")
            for v in nbrs:
                if not 0 <= v < self.vertex_count:
                    raise InputError(f"neighbour {v} of {u} out of range")
                if v == u:
                    raise InputError(f"self-loop at {u}")
        if not self.directed:
            for u, nbrs in enumerate(self.adjacency):
                for v in nbrs:
                    if u not in self._nbr_sets[v]:
                        raise InputError(f"undirected edge {u}-{v} stored one way only")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], directed: bool = False) -> "Graph":
        """Build a simple graph; duplicate edges and self-loops raise."""
        adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise InputError(f"self-loop at {u}")
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            adj[u].append(v)
            if not directed:
                adj[v].append(u)
        return cls(n, directed, tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def empty(cls, n: int, directed: bool = False) -> "Graph":
        return cls(n, directed, tuple(() for _ in range(n)))

    @cached_property
    def _nbr_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def in_adjacency(self) -> tuple[tuple[int, ...], ...]:
        if not self.directed:
            return self.adjacency
        inn: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                inn[v].append(u)
        return tuple(tuple(sorted(a)) for a in inn)

    @cached_property
    def underlying(self) -> tuple[tuple[int, ...], ...]:
        """Undirected neighbourhoods (in- and out-neighbours merged)."""
        if not self.directed:
            return self.adjacency
        return tuple(
            tuple(sorted(set(self.adjacency[v]) | set(self.in_adjacency[v])))
            for v in range(self.vertex_count)
        )

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted ``u * n + v`` for every arc (both orientations if undirected)."""
        n = self.vertex_count
        keys = [u * n + v for u, nbrs in enumerate(self.adjacency) for v in nbrs]
        return np.sort(np.asarray(keys, dtype=np.int64))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr_sets[u]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list; undirected edges are reported once as (min, max)."""
        out = []
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if self.directed or u < v:
                    out.append((u, v))
        return out

    @property
    def edge_count(self) -> int:
        total = sum(len(a) for a in self.adjacency)
        return total if self.directed else total // 2

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise InputError(f"vertex {v} out of range")

    def induced_subgraph(self, keep: Sequence[int]) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph on ``keep`` renumbered in the given order; returns (graph, new->old)."""
        index = {v: i for i, v in enumerate(keep)}
        edges = [
            (index[u], index[v])
            for u, v in self.edges()
            if u in index and v in index
        ]
        return Graph.from_edges(len(keep), edges, self.directed), tuple(keep)


@dataclass(frozen=True)
class Instance:
    graph: Graph
    labelled: bool
    source: tuple[int, ...]
    target: tuple[int, ...]
    budget: int
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        if len(self.source) != len(self.target):
            raise InputError(f"|S| = {len(self.source)} but |T| = {len(self.target)}")
        for name, conf in (("source", self.source), ("target", self.target)):
            if len(set(conf)) != len(conf):
                raise InputError(f"{name} configuration repeats a vertex")
            for v in conf:
                if not 0 <= v < self.graph.vertex_count:
                    raise InputError(f"{name} vertex {v} out of range")
        if self.budget < 0:
            raise InputError("budget must be non-negative")

    @property
    def variant(self) -> str:
        return variant_name(self.graph.directed, self.labelled)

    @property
    def directed(self) -> bool:
        return self.graph.directed

    @property
    def k(self) -> int:
        return len(self.source)

    def with_budget(self, budget: int) -> "Instance":
        return Instance(self.graph, self.labelled, self.source, self.target, budget, self.provenance)


class RangePath(Sequence):
    """A path stored as a concatenation of unit-step ranges.

    Reconfiguration gadgets produce paths of thousands of consecutive
    vertex ids; keeping them as ranges keeps large sequences in memory.
    """

    __slots__ = ("parts", "_len")

    def __init__(self, *parts):
        out = []
        for p in parts:
            r = p if isinstance(p, range) else range(p, p + 1)
            if len(r) == 0:
                continue
            if r.step not in (1, -1) and len(r) > 1:
                raise InputError("range path parts must have step 1 or -1")
            out.append(r)
        self.parts = tuple(out)
        self._len = sum(len(r) for r in out)

    def __len__(self):
        return self._len

    def __iter__(self):
        for r in self.parts:
            yield from r

    def __getitem__(self, i):
        if isinstance(i, slice):
            return tuple(self)[i]
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        for r in self.parts:
            if i < len(r):
                return r[i]
            i -= len(r)

    def __eq__(self, other):
        if isinstance(other, RangePath):
            return tuple(self) == tuple(other)
        if isinstance(other, (tuple, list)):
            return tuple(self) == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self))

    def __repr__(self):
        return f"RangePath({', '.join(map(repr, self.parts))})"

    def is_simple(self) -> bool:
        spans = sorted((min(r[0], r[-1]), max(r[0], r[-1])) for r in self.parts)
        return all(a[1] < b[0] for a, b in zip(spans, spans[1:]))

    def to_array(self) -> np.ndarray:
        return np.concatenate(
            [np.arange(r.start, r.stop, r.step, dtype=np.int64) for r in self.parts]
        )


@dataclass(frozen=True)
class Move:
    source_vertex: int
    target_vertex: int
    path: Sequence[int]  # tuple, or RangePath for long structured paths
    label: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.path, RangePath):
            object.__setattr__(self, "path", tuple(self.path))
        p = self.path
        if len(p) < 2 or p[0] != self.source_vertex or p[-1] != self.target_vertex:
            raise InputError(
                f"path {p} does not run from {self.source_vertex} to {self.target_vertex}"
            )
        simple = p.is_simple() if isinstance(p, RangePath) else len(set(p)) == len(p)
        if not simple:
            raise InputError(f"path {p} repeats a vertex")


@dataclass(frozen=True)
class MoveSequence:
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __getitem__(self, i):
        return self.moves[i]

    def __add__(self, other: "MoveSequence") -> "MoveSequence":
        return MoveSequence(self.moves + tuple(other.moves))


@dataclass(frozen=True)
class Verdict:
    kind: str  # valid_reaches_target | valid_wrong_final | invalid
    index: Optional[int] = None
    reason: Optional[str] = None

    @property
    def reaches_target(self) -> bool:
        return self.kind == "valid_reaches_target"

    def __str__(self) -> str:
        if self.kind == "invalid":
            return f"invalid({self.index}, {self.reason!r})"
        return self.kind


@dataclass(frozen=True)
class InstanceStats:
    k: int
    obstacles: frozenset
    symmetric_difference: frozenset
    f: int


def find_free_path(graph: Graph, occupied, s: int, t: int) -> Optional[list[int]]:
    """Shortest s-t path whose intermediate vertices avoid ``occupied``.

    Breadth-first with neighbours scanned in increasing order, so the result
    is deterministic.
    """
    graph.check_vertex(s)
    graph.check_vertex(t)
    if s == t:
        raise InputError("source and target coincide")
    parent = {s: s}
    queue = deque([s])
    adj = graph.adjacency
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in parent:
                continue
            parent[v] = u
            if v == t:
                path = [t]
                while path[-1] != s:
                    path.append(parent[path[-1]])
                return path[::-1]
            if v not in occupied:
                queue.append(v)
    return None


def apply_move(config: Sequence[int], move: Move) -> tuple[int, ...]:
    """Relocate the token on ``move.source_vertex``; label order is kept."""
    config = tuple(config)
    try:
        i = config.index(move.source_vertex)
    except ValueError:
        raise MoveError(f"no token on source {move.source_vertex}") from None
    if move.target_vertex in config:
        raise MoveError(f"target {move.target_vertex} occupied")
    return config[:i] + (move.target_vertex,) + config[i + 1:]


def validate_sequence(instance: Instance, seq: Iterable[Move], lenient: bool = False) -> Verdict:
    """Replay ``seq`` from S and check every move and the final configuration.

    Stored paths are checked verbatim.  With ``lenient`` the stored path is
    ignored and any free path is accepted.
    """
    g = instance.graph
    pos = list(instance.source)
    where = {v: i for i, v in enumerate(pos)}
    occ = None  # boolean occupancy mirror, built on the first long path
    for idx, m in enumerate(seq):
        s, t = m.source_vertex, m.target_vertex
        if not (0 <= s < g.vertex_count and 0 <= t < g.vertex_count):
            return Verdict("invalid", idx, "vertex out of range")
        if s not in where:
            return Verdict("invalid", idx, "no token on source")
        if t in where:
            return Verdict("invalid", idx, "target occupied")
        label = where[s]
        if m.label is not None and instance.labelled and m.label != label:
            return Verdict("invalid", idx, "label mismatch")
        if lenient:
            if find_free_path(g, where, s, t) is None:
                return Verdict("invalid", idx, "no free path")
        elif len(m.path) > _LONG_PATH:
            if occ is None:
                occ = np.zeros(g.vertex_count, dtype=bool)
                occ[list(where)] = True
            bad = _check_long_path(g, occ, m.path)
            if bad:
                return Verdict("invalid", idx, bad)
        else:
            path = m.path
            for a, b in zip(path, path[1:]):
                if not g.has_edge(a, b):
                    return Verdict("invalid", idx, f"path uses non-edge {a}-{b}")
            for v in path[1:-1]:
                if v in where:
                    return Verdict("invalid", idx, f"path blocked at {v}")
        del where[s]
        where[t] = label
        pos[label] = t
        if occ is not None:
            occ[s] = False
            occ[t] = True
    if instance.labelled:
        ok = tuple(pos) == instance.target
    else:
        ok = set(pos) == set(instance.target)
    return Verdict("valid_reaches_target" if ok else "valid_wrong_final")


_LONG_PATH = 64


def _check_long_path(g: Graph, occ: np.ndarray, path) -> Optional[str]:
    arr = path.to_array() if isinstance(path, RangePath) else np.asarray(path, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= g.vertex_count:
        return "vertex out of range"
    keys = arr[:-1] * g.vertex_count + arr[1:]
    table = g.edge_keys
    at = np.minimum(np.searchsorted(table, keys), len(table) - 1)
    missing = table[at] != keys if len(table) else np.ones(len(keys), dtype=bool)
    if missing.any():
        i = int(np.argmax(missing))
        return f"path uses non-edge {arr[i]}-{arr[i + 1]}"
    blocked = occ[arr[1:-1]]
    if blocked.any():
        return f"path blocked at {arr[1 + int(np.argmax(blocked))]}"
    return None


def induced_move_graph(graph: Graph, seq: Iterable[Move]) -> Graph:
    """Subgraph formed by the union of the edges on all stored paths.

    Vertex numbering is kept; vertices not on any path are isolated.
    """
    edges = set()
    for m in seq:
        for a, b in zip(m.path, m.path[1:]):
            if not graph.has_edge(a, b):
                raise InputError(f"path edge {a}-{b} not in graph")
            edges.add((a, b) if graph.directed else (min(a, b), max(a, b)))
    return Graph.from_edges(graph.vertex_count, sorted(edges), graph.directed)


def instance_stats(instance: Instance) -> InstanceStats:
    s, t = set(instance.source), set(instance.target)
    return InstanceStats(
        k=instance.k,
        obstacles=frozenset(s & t),
        symmetric_difference=frozenset(s ^ t),
        f=instance.graph.vertex_count - len(s | t),
    )


def is_forest(graph: Graph) -> bool:
    """True when the underlying multigraph has no cycle; a pair of antiparallel arcs is a cycle."""
    parent = list(range(graph.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in graph.edges():
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def non_isolated_leaves(graph: Graph) -> list[int]:
    return [v for v in range(graph.vertex_count) if len(graph.underlying[v]) == 1]
