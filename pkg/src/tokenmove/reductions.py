"""Generators of hard token-moving instances.

* broom graphs from Red-Blue Dominating Set (all four variants);
* labelled directed instances from Multicolored Subgraph Isomorphism;
* labelled undirected instances from the same problem, using edge-paths and
  a clock gadget that opens superedges one at a time.

The MSI builders also produce forward certificates: explicit move sequences
for a planted copy of H, which the verifier can replay.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import CapExceeded, ConstructionError, InputError
from .graph import VARIANTS, Graph, Instance, Move, MoveSequence, RangePath


@dataclass(frozen=True)
class RBDSInstance:
    blue: int  # blue vertices are 0..blue-1
    red: int  # red vertices are 0..red-1
    edges: tuple  # (b, r) pairs
    k: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(tuple(e) for e in self.edges)))
        if self.blue < 0 or self.red < 0 or self.k < 0:
            raise InputError("counts and k must be non-negative")
        if len(set(self.edges)) != len(self.edges):
            raise InputError("duplicate blue-red edge")
        for b, r in self.edges:
            if not (0 <= b < self.blue and 0 <= r < self.red):
                raise InputError(f"edge ({b}, {r}) is not between a blue and a red vertex")


def rbds_feasible(rbds: RBDSInstance) -> bool:
    """Brute force: do at most k blue vertices dominate every red vertex?"""
    covers = [0] * rbds.blue
    for b, r in rbds.edges:
        covers[b] |= 1 << r
    want = (1 << rbds.red) - 1
    for size in range(min(rbds.k, rbds.blue) + 1):
        for pick in combinations(range(rbds.blue), size):
            got = 0
            for b in pick:
                got |= covers[b]
            if got == want:
                return True
    return False


def reduce_rbds(rbds: RBDSInstance, variant: str) -> Instance:
    """Broom graph: handle path W -> blue layer B -> red layer R.

    Vertices are numbered W, then B, then R, then (labelled variants) the
    private partners H of the blue vertices.
    """
    if variant not in VARIANTS:
        raise InputError(f"unknown variant {variant!r}")
    directed, labelled = VARIANTS[variant]
    nw, nb, nr = rbds.red, rbds.blue, rbds.red
    w = list(range(nw))
    b = [nw + i for i in range(nb)]
    r = [nw + nb + i for i in range(nr)]
    h = [nw + nb + nr + i for i in range(nb)] if labelled else []
    edges = [(w[i], w[i + 1]) for i in range(nw - 1)]
    if nw:
        edges += [(w[-1], x) for x in b]
    edges += [(b[bi], r[ri]) for bi, ri in rbds.edges]
    for x, y in zip(b, h):
        edges.append((x, y))
        if directed:
            edges.append((y, x))
    n = nw + nb + nr + len(h)
    graph = Graph.from_edges(n, edges, directed)
    budget = rbds.red + (2 * rbds.k if labelled else rbds.k)
    return Instance(graph, labelled, w + b, r + b, budget, (f"rbds:{variant}",))


# ---------------------------------------------------------------- MSI

@dataclass(frozen=True)
class MSIInstance:
    gm: Graph  # host graph G_M (undirected)
    colors: tuple  # color of each G_M vertex, 0-based in range(h.vertex_count)
    h: Graph  # pattern graph H on the colors
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if self.gm.directed or self.h.directed:
            raise InputError("G_M and H must be undirected")
        if len(self.colors) != self.gm.vertex_count:
            raise InputError("one color per G_M vertex is required")
        c = self.h.vertex_count
        for v, col in enumerate(self.colors):
            if not 0 <= col < c:
                raise InputError(f"vertex {v} has color {col} outside 0..{c - 1}")
        if not 0 <= self.root < c:
            raise InputError(f"root {self.root} is not a vertex of H")

    @property
    def k(self) -> int:
        return self.h.vertex_count


def _bfs_levels(h: Graph, root: int) -> list:
    level = [None] * h.vertex_count
    level[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in h.adjacency[u]:
            if level[v] is None:
                level[v] = level[u] + 1
                queue.append(v)
    if any(x is None for x in level):
        raise InputError("H is disconnected")
    return level


def build_level_dag(h: Graph, root: int) -> tuple[Graph, tuple]:
    """Orient every edge of H from the lower BFS level to the higher one."""
    h.check_vertex(root)
    level = _bfs_levels(h, root)
    arcs = []
    for u, v in h.edges():
        if level[u] == level[v]:
            raise InputError(f"H is not bipartite (edge {u}-{v} inside level {level[u]})")
        arcs.append((u, v) if level[u] < level[v] else (v, u))
    return Graph.from_edges(h.vertex_count, arcs, True), tuple(level)


def _clock_arcs(msi: MSIInstance):
    """H' arcs in clock order: level, then head, then tail."""
    dag, level = build_level_dag(msi.h, msi.root)
    arcs = sorted(dag.edges(), key=lambda a: (level[a[0]], a[1], a[0]))
    return arcs, level


def _supernodes(msi: MSIInstance):
    members = [[] for _ in range(msi.k)]
    for v, col in enumerate(msi.colors):
        members[col].append(v)
    return members


def _arc_edges(msi: MSIInstance, arcs):
    """Retained G_M edges per H' arc, oriented from colour i to colour j."""
    by_pair = {a: [] for a in arcs}
    for x, y in msi.gm.edges():
        cx, cy = msi.colors[x], msi.colors[y]
        if (cx, cy) in by_pair:
            by_pair[(cx, cy)].append((x, y))
        elif (cy, cx) in by_pair:
            by_pair[(cy, cx)].append((y, x))
    return {a: sorted(e) for a, e in by_pair.items()}


def _check_planted(msi: MSIInstance, planted) -> list:
    """Planted vertex of each colour, or a construction error."""
    planted = sorted(set(planted))
    chosen = [None] * msi.k
    for v in planted:
        if not 0 <= v < msi.gm.vertex_count:
            raise ConstructionError(f"planted vertex {v} is not in G_M")
        col = msi.colors[v]
        if chosen[col] is not None:
            raise ConstructionError(f"two planted vertices have color {col}")
        chosen[col] = v
    if any(v is None for v in chosen):
        raise ConstructionError("planted set must contain one vertex of every color")
    for i, j in msi.h.edges():
        if not msi.gm.has_edge(chosen[i], chosen[j]):
            raise ConstructionError(f"planted vertices of colors {i} and {j} are not adjacent")
    return chosen


class _Tracker:
    """Follows token labels while a certificate is generated."""

    def __init__(self, source):
        self.label = {v: i for i, v in enumerate(source)}
        self.moves = []

    def move(self, path):
        s, t = path[0], path[-1]
        lab = self.label.pop(s)
        self.label[t] = lab
        self.moves.append(Move(s, t, path, lab))

    def sequence(self) -> MoveSequence:
        return MoveSequence(self.moves)


@dataclass(frozen=True)
class _DirectedLayout:
    arcs: list
    members: list
    source_of: dict  # arc -> source-gadget vertex
    target_of: dict  # arc -> target-gadget vertex
    storage: list  # color -> storage vertex
    vertex_count: int


def _directed_layout(msi: MSIInstance) -> _DirectedLayout:
    arcs, _ = _clock_arcs(msi)
    n = msi.gm.vertex_count
    source_of = {a: n + 2 * t for t, a in enumerate(arcs)}
    target_of = {a: n + 2 * t + 1 for t, a in enumerate(arcs)}
    base = n + 2 * len(arcs)
    storage = [base + i for i in range(msi.k)]
    return _DirectedLayout(arcs, _supernodes(msi), source_of, target_of, storage, base + msi.k)


def reduce_msi_directed(msi: MSIInstance) -> Instance:
    """LDTM instance whose yes-answer at budget |E(H)| + 2k certifies a copy of H."""
    lay = _directed_layout(msi)
    edges = []
    for (i, j), pairs in _arc_edges(msi, lay.arcs).items():
        edges.extend(pairs)
    for a in lay.arcs:
        i, j = a
        edges += [(lay.source_of[a], v) for v in lay.members[i]]
        edges += [(v, lay.target_of[a]) for v in lay.members[j]]
    for col, st in enumerate(lay.storage):
        for v in lay.members[col]:
            edges += [(st, v), (v, st)]
    graph = Graph.from_edges(lay.vertex_count, edges, True)
    nodes = list(range(msi.gm.vertex_count))
    source = [lay.source_of[a] for a in lay.arcs] + nodes
    target = [lay.target_of[a] for a in lay.arcs] + nodes
    budget = msi.h.edge_count + 2 * msi.k
    return Instance(graph, True, source, target, budget, ("msi-dir",))


def forward_sequence_directed(msi: MSIInstance, planted) -> MoveSequence:
    """Clear the planted node-vertices, move every gadget token, refill."""
    chosen = _check_planted(msi, planted)
    lay = _directed_layout(msi)
    nodes = list(range(msi.gm.vertex_count))
    tr = _Tracker([lay.source_of[a] for a in lay.arcs] + nodes)
    for col, v in enumerate(chosen):
        tr.move((v, lay.storage[col]))
    for a in lay.arcs:
        i, j = a
        tr.move((lay.source_of[a], chosen[i], chosen[j], lay.target_of[a]))
    for col, v in enumerate(chosen):
        tr.move((lay.storage[col], v))
    return tr.sequence()


# ---------------------------------------------------------------- undirected (clock gadget)

@dataclass(frozen=True)
class ClockParameters:
    K: int
    L: int
    Q: int
    Q_star: int
    level_counts: tuple  # tokens per direction for a superedge at level r
    ell: int
    k: int
    edge_count: int
    vertex_count: int  # predicted size of the reduced graph


def clock_parameters(msi: MSIInstance) -> ClockParameters:
    arcs, level = _clock_arcs(msi)
    k = msi.k
    e = len(arcs)
    if e == 0:
        raise InputError("H needs at least one edge")
    q = math.ceil(3 * k * k / 2)
    z = max(level[i] for i, _ in arcs)
    counts = [0] * (z + 1)
    counts[z] = q
    for y in range(z - 1, -1, -1):
        counts[y] = q * counts[y + 1]
    q_star = sum(2 * counts[level[i]] for i, _ in arcs)
    big_k = 2 * q_star + k + 1
    big_l = (e - 1) * big_k + q_star + 2 * k + 2 * big_k * e + 1
    ell = e * big_l - 1
    retained = sum(len(p) for p in _arc_edges(msi, arcs).values())
    n = msi.gm.vertex_count + k + 2 * q_star + big_k * retained + e * big_k + (e - 1) * big_l
    return ClockParameters(big_k, big_l, q, q_star, tuple(counts), ell, k, e, n)


@dataclass(frozen=True)
class _UndirectedLayout:
    params: ClockParameters
    arcs: list
    level: tuple
    members: list
    storage: list
    gadget: dict  # arc -> (fwd_src, fwd_tgt, rev_src, rev_tgt) ranges
    edge_paths: dict  # arc -> list of ((x, y), range)
    storage_paths: list  # p-1 -> range, top end first
    linking_paths: list  # p-1 -> range, left end first


def _undirected_layout(msi: MSIInstance, params: ClockParameters) -> _UndirectedLayout:
    arcs, level = _clock_arcs(msi)
    arc_edges = _arc_edges(msi, arcs)
    nxt = msi.gm.vertex_count
    storage = list(range(nxt, nxt + msi.k))
    nxt += msi.k
    gadget = {}
    for a in arcs:
        cnt = params.level_counts[level[a[0]]]
        blocks = []
        for _ in range(4):
            blocks.append(range(nxt, nxt + cnt))
            nxt += cnt
        gadget[a] = tuple(blocks)
    edge_paths = {}
    for a in arcs:
        edge_paths[a] = []
        for xy in arc_edges[a]:
            edge_paths[a].append((xy, range(nxt, nxt + params.K)))
            nxt += params.K
    kp, lp = [], []
    for p in range(params.edge_count):
        kp.append(range(nxt, nxt + params.K))
        nxt += params.K
        if p < params.edge_count - 1:
            lp.append(range(nxt, nxt + params.L))
            nxt += params.L
    if nxt != params.vertex_count:
        raise ConstructionError(f"layout has {nxt} vertices, expected {params.vertex_count}")
    return _UndirectedLayout(
        params, arcs, level, _supernodes(msi), storage, gadget, edge_paths, kp, lp
    )


def _chain(lay: _UndirectedLayout, p: int) -> tuple:
    """Clock segment p (0-based): K_p top->bottom, L_p, K_{p+1} bottom->top."""
    return lay.storage_paths[p], lay.linking_paths[p], lay.storage_paths[p + 1][::-1]


def _undirected_configs(lay: _UndirectedLayout, gm_n: int):
    source, target = [], []
    for a in lay.arcs:
        fs, ft, rs, rt = lay.gadget[a]
        source += list(fs) + list(rs)
        target += list(ft) + list(rt)
    K, L = lay.params.K, lay.params.L
    for p in range(lay.params.edge_count - 1):
        chain = [v for part in _chain(lay, p) for v in part]
        source += chain[K:K + K + L]
        target += chain[:K + L]
    fixed = list(range(gm_n))
    for a in lay.arcs:
        for _, r in lay.edge_paths[a]:
            fixed += list(r)
    return source + fixed, target + fixed


def reduce_msi_undirected(msi: MSIInstance, cap: int = 10**6) -> tuple[Instance, ClockParameters]:
    """LUTM instance with the clock gadget; refuses when the graph would exceed ``cap`` vertices."""
    params = clock_parameters(msi)
    if params.vertex_count > cap:
        raise CapExceeded(
            f"reduced graph would have {params.vertex_count} vertices, above cap {cap} "
            f"(K={params.K}, L={params.L}, Q*={params.Q_star}, ell={params.ell})",
            cap=cap, predicted=params.vertex_count, details=params,
        )
    lay = _undirected_layout(msi, params)
    edges = []
    for col, st in enumerate(lay.storage):
        edges += [(st, v) for v in lay.members[col]]
    for a in lay.arcs:
        i, j = a
        fs, ft, rs, rt = lay.gadget[a]
        for block, col in ((fs, i), (ft, j), (rs, j), (rt, i)):
            for g in block:
                edges += [(g, v) for v in lay.members[col]]
    mid = (params.K - 1) // 2
    for p, a in enumerate(lay.arcs):
        top = lay.storage_paths[p][0]
        for (x, y), r in lay.edge_paths[a]:
            edges += list(zip(r, r[1:]))
            edges += [(x, r[0]), (r[-1], y), (top, r[mid])]
    for r in lay.storage_paths + lay.linking_paths:
        edges += list(zip(r, r[1:]))
    for p, r in enumerate(lay.linking_paths):
        edges += [(lay.storage_paths[p][-1], r[0]), (r[-1], lay.storage_paths[p + 1][-1])]
    graph = Graph.from_edges(params.vertex_count, edges, False)
    source, target = _undirected_configs(lay, msi.gm.vertex_count)
    inst = Instance(graph, True, source, target, params.ell, ("msi-undir",))
    return inst, params


def _edge_choice(msi, lay, chosen, edge_choice):
    out = {}
    for a in lay.arcs:
        i, j = a
        xy = (chosen[i], chosen[j])
        if edge_choice is not None and a in edge_choice:
            xy = tuple(edge_choice[a])
            if xy != (chosen[i], chosen[j]):
                raise ConstructionError(f"edge choice {xy} for superedge {a} misses the planted vertices")
        match = [r for e, r in lay.edge_paths[a] if e == xy]
        if not match:
            raise ConstructionError(f"no edge-path for {xy} in superedge {a}")
        out[a] = (xy, match[0])
    return out


def forward_sequence_undirected(
    msi: MSIInstance, planted, edge_choice: Optional[dict] = None, cap: int = 10**6
) -> MoveSequence:
    """Certificate of exactly ell moves for a planted copy of H.

    ``edge_choice`` maps an H' arc (i, j) to the planted G_M edge used for
    that superedge; by default the edge between the planted vertices.
    """
    chosen = _check_planted(msi, planted)
    params = clock_parameters(msi)
    if params.vertex_count > cap:
        raise CapExceeded(
            f"reduced graph would have {params.vertex_count} vertices, above cap {cap}",
            cap=cap, predicted=params.vertex_count, details=params,
        )
    lay = _undirected_layout(msi, params)
    picks = _edge_choice(msi, lay, chosen, edge_choice)
    source, _ = _undirected_configs(lay, msi.gm.vertex_count)
    tr = _Tracker(source)
    K, L = params.K, params.L
    mid = (K - 1) // 2
    order = list(range(mid, -1, -1)) + list(range(mid + 1, K))

    for col, v in enumerate(chosen):
        tr.move((v, lay.storage[col]))
    for p, a in enumerate(lay.arcs):
        (x, y), e = picks[a]
        kp = lay.storage_paths[p]
        # clear the chosen edge-path into K_p, deepest slot first
        paths = []
        for jj, u in enumerate(order):
            if u <= mid:
                along = range(e[u], e[mid] + 1)
            else:
                along = range(e[u], e[mid] - 1, -1)
            paths.append(RangePath(along, range(kp[0], kp[K - 1 - jj] + 1)))
        for path in paths:
            tr.move(path)
        fs, ft, rs, rt = lay.gadget[a]
        for s, t in zip(fs, ft):
            tr.move(RangePath(s, x, range(e[0], e[-1] + 1), y, t))
        for s, t in zip(rs, rt):
            tr.move(RangePath(s, y, range(e[-1], e[0] - 1, -1), x, t))
        for path in reversed(paths):
            tr.move(RangePath(*(r[::-1] for r in reversed(path.parts))))
        if p < params.edge_count - 1:
            kq, lq, kq1 = _chain(lay, p)
            head = range(kq[0], lq[-1] + 1)  # chain positions 0..K+L-1
            for t in range(K + L):
                start = K + t
                if start >= K + L:
                    up = kq1[start - K - L:: -1]  # K_{p+1} part, walking to its bottom
                    tail = head[t:][::-1]
                    tr.move(RangePath(up, tail))
                else:
                    tr.move(RangePath(head[t:start + 1][::-1]))
    for col, v in enumerate(chosen):
        tr.move((lay.storage[col], v))
    return tr.sequence()
