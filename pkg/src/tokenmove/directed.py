"""Fixed-parameter solver for unlabelled directed token moving.

A yes-instance has a shortest sequence whose move graph is a small directed
forest containing every vertex of S Δ T.  We enumerate labelled directed
forests of the admissible sizes, keep those that are yes-instances on their
own, and look for a label-respecting copy in the (contracted, pruned) input
digraph.  The copy is found either exactly by backtracking or by color coding
over a weighted gadget graph whose heavy pendant arcs force labels to match.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Optional

from .errors import InputError, UnsupportedVariant
from .graph import Graph, Instance, Move, MoveSequence
from .oracle import shortest_transforming_sequence
from .preprocess import contract, is_contracted, lift_sequence, prune_obstacles_with_map
from .unlabelled import Solution

POOL = None  # label of vertices outside S Δ T


def label_str(label) -> str:
    return "Δ" if label is None else f"{label[0]}{label[1]}"


@dataclass(frozen=True)
class LabelledForestWitness:
    forest: Graph
    labels: tuple  # per vertex: ("s", i) | ("t", j) | None, with i, j 1-based

    @property
    def size(self) -> int:
        return self.forest.vertex_count

    def sources(self) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab is None or lab[0] == "s"]

    def targets(self) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab is None or lab[0] == "t"]

    def as_instance(self, budget: int) -> Instance:
        return Instance(self.forest, False, self.sources(), self.targets(), budget)


@dataclass(frozen=True)
class WeightedGadgetPair:
    host: Graph
    host_weights: dict  # arc -> weight; arcs absent from the dict weigh 1
    pattern: Graph
    pattern_weights: dict
    q: int  # witness size used to scale the gadget weights
    host_core: int  # host vertices 0..host_core-1 are the digraph's own vertices
    pattern_core: int

    @property
    def full_weight(self) -> int:
        return sum(self.pattern_weights.get(a, 1) for a in self.pattern.edges())


@dataclass(frozen=True)
class Embedding:
    mapping: dict  # pattern vertex -> host vertex
    weight: int


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _forests(q: int) -> tuple:
    """All forests on vertex set range(q), as sorted edge tuples (u < v)."""
    pairs = [(u, v) for u in range(q) for v in range(u + 1, q)]
    out = []
    parent = list(range(q))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def rec(i, chosen):
        if i == len(pairs):
            out.append(tuple(chosen))
            return
        rec(i + 1, chosen)
        u, v = pairs[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append(pairs[i])
            rec(i + 1, chosen)
            chosen.pop()
            parent[ru] = ru

    rec(0, [])
    return tuple(out)


def _labellings(q: int, delta: int, complete: bool):
    from itertools import combinations

    sizes = [(delta, delta)] if complete else [
        (a, b) for a in range(delta + 1) for b in range(delta + 1) if a + b <= q
    ]
    for a, b in sizes:
        if a + b > q:
            continue
        for s_used in combinations(range(1, delta + 1), a):
            for t_used in combinations(range(1, delta + 1), b):
                labels = [("s", i) for i in s_used] + [("t", j) for j in t_used]
                labels += [POOL] * (q - a - b)
                yield tuple(labels)


@lru_cache(maxsize=None)
def _labelled_forest_list(q: int, delta: int, complete: bool) -> tuple:
    out = []
    for labels in _labellings(q, delta, complete):
        pool = [v for v, lab in enumerate(labels) if lab is POOL]
        perms = []
        for p in permutations(pool):
            relabel = list(range(q))
            for old, new in zip(pool, p):
                relabel[old] = new
            perms.append(relabel)
        seen = set()
        for edges in _forests(q):
            e = len(edges)
            for bits in range(1 << e):
                arcs = [
                    (v, u) if bits >> i & 1 else (u, v) for i, (u, v) in enumerate(edges)
                ]
                if len(perms) > 1:
                    canon = min(tuple(sorted((r[a], r[b]) for a, b in arcs)) for r in perms)
                else:
                    canon = tuple(sorted(arcs))
                if canon in seen:
                    continue
                seen.add(canon)
                out.append((labels, canon))
    return tuple(out)


def enumerate_labelled_forests(
    q: int, delta: int, complete: bool = False
) -> Iterator[LabelledForestWitness]:
    """Every directed forest on q vertices with every admissible labelling.

    Labels s_i and t_j (1 <= i, j <= delta) are used at most once each, all
    other vertices are pool vertices; the stream holds one representative
    per label-preserving isomorphism class.  With ``complete`` only
    labellings using all 2·delta labels are produced.
    """
    if q < 1:
        return
    for labels, arcs in _labelled_forest_list(q, delta, complete):
        yield LabelledForestWitness(Graph.from_edges(q, arcs, True), labels)


# ---------------------------------------------------------------- labels of the host

def instance_labels(instance: Instance) -> tuple:
    s, t = set(instance.source), set(instance.target)
    labels = [POOL] * instance.graph.vertex_count
    for i, v in enumerate(sorted(s - t), 1):
        labels[v] = ("s", i)
    for j, v in enumerate(sorted(t - s), 1):
        labels[v] = ("t", j)
    return tuple(labels)


# ---------------------------------------------------------------- gadgets

def build_weight_gadget(D: Graph, d_labels, H: LabelledForestWitness, delta: int) -> WeightedGadgetPair:
    """Attach weighted pendant arcs encoding labels to both digraphs.

    A vertex labelled s_i gets i pendant in-neighbours (arc weight i·q), a
    vertex labelled t_j gets delta+j pendant out-neighbours (weight
    (delta+j)·q), with q the witness size.  Other arcs weigh one.
    """
    q = H.size

    def attach(graph: Graph, labels):
        n = graph.vertex_count
        arcs = list(graph.edges())
        weights = {}
        for v, lab in enumerate(labels):
            if lab is POOL:
                continue
            kind, idx = lab
            count = idx if kind == "s" else delta + idx
            for _ in range(count):
                p = n
                n += 1
                arc = (p, v) if kind == "s" else (v, p)
                arcs.append(arc)
                weights[arc] = count * q
        return Graph.from_edges(n, arcs, True), weights

    host, hw = attach(D, d_labels)
    pattern, pw = attach(H.forest, H.labels)
    return WeightedGadgetPair(host, hw, pattern, pw, q, D.vertex_count, H.size)


# ---------------------------------------------------------------- embedding engines

def _rooted(pattern: Graph):
    """Post-order of each underlying tree with (child, parent->child?) lists."""
    und = pattern.underlying
    seen = set()
    comps = []
    for root in range(pattern.vertex_count):
        if root in seen:
            continue
        order = []
        children = {}
        stack = [root]
        seen.add(root)
        while stack:
            u = stack.pop()
            order.append(u)
            children[u] = []
            for v in und[u]:
                if v not in seen:
                    seen.add(v)
                    children[u].append((v, pattern.has_edge(u, v)))
                    stack.append(v)
        comps.append((root, order[::-1], children))
    return comps


def _check_forest_pattern(pattern: Graph):
    from .graph import is_forest

    if not is_forest(pattern):
        raise InputError("pattern is not a forest")


def _color_coding_trial(host, hweights, pattern, pweights_unused, colors, allowed):
    """Best colorful copy under one coloring: (weight, mapping) or None."""
    comps = _rooted(pattern)
    out_adj, in_adj = host.adjacency, host.in_adjacency
    total = {0: (0, ())}
    for root, order, children in comps:
        tables = {}
        for u in order:
            table = {}
            for x in range(host.vertex_count):
                if allowed is None or allowed(u, x):
                    table[x] = {1 << colors[x]: (0, ((u, x),))}
            for c, forward in children[u]:
                child = tables.pop(c)
                new = {}
                for x, entries in table.items():
                    nbrs = out_adj[x] if forward else in_adj[x]
                    acc = {}
                    for y in nbrs:
                        centries = child.get(y)
                        if not centries:
                            continue
                        w_arc = hweights.get((x, y) if forward else (y, x), 1)
                        for c1, (w1, m1) in entries.items():
                            for c2, (w2, m2) in centries.items():
                                if c1 & c2:
                                    continue
                                cs = c1 | c2
                                w = w1 + w2 + w_arc
                                if cs not in acc or acc[cs][0] < w:
                                    acc[cs] = (w, m1 + m2)
                    if acc:
                        new[x] = acc
                table = new
            tables[u] = table
        root_table = tables[root]
        merged = {}
        for c1, (w1, m1) in total.items():
            for entries in root_table.values():
                for c2, (w2, m2) in entries.items():
                    if c1 & c2:
                        continue
                    cs = c1 | c2
                    w = w1 + w2
                    if cs not in merged or merged[cs][0] < w:
                        merged[cs] = (w, m1 + m2)
        total = merged
        if not total:
            return None
    best = None
    for w, m in total.values():
        if best is None or w > best[0]:
            best = (w, m)
    return best


def color_coding_trials(q: int, delta: float) -> int:
    return max(1, math.ceil(math.exp(q) * math.log(1 / delta)))


def _color_coding(host, hweights, pattern, allowed, delta, seed, stop_at=None):
    q = pattern.vertex_count
    rng = random.Random(seed)
    best = None
    for _ in range(color_coding_trials(q, delta)):
        colors = [rng.randrange(q) for _ in range(host.vertex_count)]
        found = _color_coding_trial(host, hweights, pattern, None, colors, allowed)
        if found is not None and (best is None or found[0] > best[0]):
            best = found
            if stop_at is not None and best[0] >= stop_at:
                break
    if best is None:
        return None
    return Embedding(dict(best[1]), best[0])


def _exact_weighted(host, hweights, pattern, pweights, allowed=None):
    """Exhaustive injective maximum-weight copy of ``pattern`` in ``host``."""
    order = []
    for root, post, _ in _rooted(pattern):
        order.extend(reversed(post))
    pos = {u: i for i, u in enumerate(order)}
    # arcs to check when placing order[i]: arcs to earlier vertices
    back_arcs = [[] for _ in order]
    for a, b in pattern.edges():
        if pos[a] < pos[b]:
            back_arcs[pos[b]].append((a, b))
        else:
            back_arcs[pos[a]].append((a, b))
    max_w = max([1] + list(hweights.values()))
    remaining = [0] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        remaining[i] = remaining[i + 1] + len(back_arcs[i]) * max_w
    best = [None, None]
    mapping = {}
    used = set()

    def rec(i, w):
        if best[0] is not None and w + remaining[i] <= best[0]:
            return
        if i == len(order):
            best[0], best[1] = w, dict(mapping)
            return
        u = order[i]
        anchor = next((arc for arc in back_arcs[i]), None)
        if anchor is None:
            cands = range(host.vertex_count)
        elif anchor[0] == u:
            cands = host.in_adjacency[mapping[anchor[1]]]
        else:
            cands = host.adjacency[mapping[anchor[0]]]
        for x in cands:
            if x in used or (allowed is not None and not allowed(u, x)):
                continue
            gain = 0
            ok = True
            for a, b in back_arcs[i]:
                ha = x if a == u else mapping[a]
                hb = x if b == u else mapping[b]
                if not host.has_edge(ha, hb):
                    ok = False
                    break
                gain += hweights.get((ha, hb), 1)
            if not ok:
                continue
            mapping[u] = x
            used.add(x)
            rec(i + 1, w + gain)
            used.discard(x)
            del mapping[u]

    rec(0, 0)
    if best[0] is None:
        return None
    return Embedding(best[1], best[0])


def max_weight_forest_embedding(
    pair: WeightedGadgetPair, delta: float = 1e-3, exact_threshold: int = 15, seed: int = 0
) -> Optional[Embedding]:
    """Maximum-weight copy of the pattern forest in the host.

    Exhaustive when the host has at most ``exact_threshold`` vertices,
    otherwise color coding with ceil(e^q ln(1/delta)) random colorings
    (may miss the optimum with probability at most delta).
    """
    _check_forest_pattern(pair.pattern)
    if pair.host.vertex_count <= exact_threshold:
        return _exact_weighted(pair.host, pair.host_weights, pair.pattern, pair.pattern_weights)
    return _color_coding(
        pair.host, pair.host_weights, pair.pattern, None, delta, seed, stop_at=pair.full_weight
    )


def _respects_labels(mapping, h_labels, d_labels) -> bool:
    return all(d_labels[mapping[u]] == lab for u, lab in enumerate(h_labels))


def find_label_respecting_copy(
    H: LabelledForestWitness,
    D: Graph,
    d_labels,
    delta: int,
    engine: str = "gadget",
    exact: bool = True,
    delta_prob: float = 1e-3,
    seed: int = 0,
) -> Optional[dict]:
    """Injective arc-preserving map H -> D that keeps every label, or None."""
    if exact:
        allowed = lambda u, x: d_labels[x] == H.labels[u]  # noqa: E731
        emb = _exact_weighted(D, {}, H.forest, {}, allowed)
        return None if emb is None else emb.mapping
    if engine == "gadget":
        pair = build_weight_gadget(D, d_labels, H, delta)
        emb = max_weight_forest_embedding(pair, delta_prob, exact_threshold=0, seed=seed)
        if emb is None or emb.weight < pair.full_weight:
            return None
        core = {u: emb.mapping[u] for u in range(H.size)}
        if any(x >= pair.host_core for x in core.values()):
            return None
        return core if _respects_labels(core, H.labels, d_labels) else None
    if engine == "direct":
        allowed = lambda u, x: d_labels[x] == H.labels[u]  # noqa: E731
        emb = _color_coding(D, {}, H.forest, allowed, delta_prob, seed, stop_at=0)
        return None if emb is None else emb.mapping
    raise InputError(f"unknown engine {engine!r}")


# ---------------------------------------------------------------- witnesses

@lru_cache(maxsize=None)
def _witness_length(H: LabelledForestWitness) -> Optional[int]:
    if len(H.sources()) != len(H.targets()):
        return None
    return shortest_transforming_sequence(H.as_instance(0)).shortest_length


def _covers_all_labels(H: LabelledForestWitness, delta: int) -> bool:
    want = {("s", i) for i in range(1, delta + 1)} | {("t", j) for j in range(1, delta + 1)}
    return want <= {lab for lab in H.labels if lab is not POOL}


def is_witness(
    H: LabelledForestWitness,
    instance: Instance,
    engine: str = "gadget",
    exact_threshold: int = 15,
    delta: float = 1e-3,
    seed: int = 0,
) -> bool:
    """H is a yes-instance within the budget and has a label-respecting copy in D."""
    if instance.variant != "UDTM":
        raise UnsupportedVariant("witnesses are defined for UDTM")
    if H.size > 2 * instance.budget:
        raise InputError(f"witness has {H.size} vertices, more than 2·budget")
    d_labels = instance_labels(instance)
    n_delta = sum(1 for lab in d_labels if lab is not POOL and lab[0] == "s")
    if not _covers_all_labels(H, n_delta):
        return False
    length = _witness_length(H)
    if length is None or length > instance.budget:
        return False
    exact = instance.graph.vertex_count <= exact_threshold
    return find_label_respecting_copy(
        H, instance.graph, d_labels, n_delta, engine, exact, delta, seed
    ) is not None


def _pool_candidates_exist(H, D, pin, pool_vertices) -> bool:
    """Every pool vertex of H has some pool vertex of D fitting its arcs to labelled vertices."""
    for u, lab in enumerate(H.labels):
        if lab is not POOL:
            continue
        outs = [pin[v] for v in H.forest.adjacency[u] if v in pin]
        ins = [pin[v] for v in H.forest.in_adjacency[u] if v in pin]
        if not any(
            all(D.has_edge(x, y) for y in outs) and all(D.has_edge(y, x) for y in ins)
            for x in pool_vertices
        ):
            return False
    return True


def solve_udtm(
    instance: Instance,
    engine: str = "gadget",
    delta: float = 1e-3,
    exact_threshold: int = 15,
    seed: int = 0,
) -> Solution:
    """Decide UDTM within budget by searching labelled forest witnesses."""
    if instance.variant != "UDTM":
        raise UnsupportedVariant(f"solve_udtm needs UDTM, got {instance.variant}")
    kernel, cmap = contract(instance)
    pruned, pmap = prune_obstacles_with_map(kernel)
    D = pruned.graph
    S, T = set(pruned.source), set(pruned.target)
    n_delta = len(S - T)
    ell = instance.budget
    if n_delta == 0:
        empty = MoveSequence()
        return Solution(True, empty, "forest", kernel, empty)
    if n_delta > ell:
        return Solution(False, None, "forest", kernel)
    d_labels = instance_labels(pruned)
    n_obstacles = len(S & T)
    exact = D.vertex_count <= exact_threshold
    # labelled witness vertices 0..2Δ-1 map to fixed host vertices
    label_pos = {lab: v for v, lab in enumerate(d_labels) if lab is not POOL}
    n_d = D.vertex_count
    d_mask = 0
    for a, b in D.edges():
        if d_labels[a] is not POOL and d_labels[b] is not POOL:
            d_mask |= 1 << (a * n_d + b)

    pool_vertices = [v for v, lab in enumerate(d_labels) if lab is POOL]
    lo = 2 * n_delta
    hi = min(2 * n_delta + ell - n_delta, 2 * n_delta + n_obstacles)
    for q in range(lo, hi + 1):
        for H in enumerate_labelled_forests(q, n_delta, complete=True):
            pin = {u: label_pos[lab] for u, lab in enumerate(H.labels) if lab is not POOL}
            h_mask = 0
            for a, b in H.forest.edges():
                if a in pin and b in pin:
                    h_mask |= 1 << (pin[a] * n_d + pin[b])
            if h_mask & ~d_mask or not _pool_candidates_exist(H, D, pin, pool_vertices):
                continue
            length = _witness_length(H)
            if length is None or length > ell:
                continue
            phi = find_label_respecting_copy(H, D, d_labels, n_delta, engine, exact, delta, seed)
            if phi is None:
                continue
            hseq = shortest_transforming_sequence(H.as_instance(ell)).witness
            moves = [
                Move(pmap[phi[m.source_vertex]], pmap[phi[m.target_vertex]],
                     tuple(pmap[phi[v]] for v in m.path))
                for m in hseq
            ]
            kseq = MoveSequence(moves)
            return Solution(True, lift_sequence(cmap, kseq), "forest", kernel, kseq)
    return Solution(False, None, "forest", kernel)
