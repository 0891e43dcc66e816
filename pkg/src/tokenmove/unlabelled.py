"""Solvers for unlabelled token moving.

``solve_uutm`` partitions the symmetric difference into balanced groups and
prices each group by a minimum Steiner tree; ``solve_by_k`` searches move
orders on the O(k) kernel.  Both work on the contracted instance and lift
emitted sequences back to the input graph.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import InputError, UnsupportedVariant
from .graph import (
    Graph,
    Instance,
    Move,
    MoveSequence,
    find_free_path,
    induced_move_graph,
    is_forest,
)
from .preprocess import contract, lift_sequence
from .steiner import SteinerResult, min_steiner_tree


@dataclass(frozen=True)
class PartitionPlan:
    groups: tuple  # ((sources...), (sinks...)) per group
    trees: tuple  # SteinerResult per group
    total_moves: int


@dataclass(frozen=True)
class Solution:
    decision: bool
    sequence: Optional[MoveSequence]
    method: str
    kernel: Optional[Instance] = None
    kernel_sequence: Optional[MoveSequence] = None
    plan: Optional[PartitionPlan] = None


# ---------------------------------------------------------------- partitions

def _set_partitions(items, d):
    """Partitions of ``items`` into exactly d blocks, restricted-growth order."""
    n = len(items)
    blocks: list[list] = []

    def rec(i):
        if i == n:
            if len(blocks) == d:
                yield [tuple(b) for b in blocks]
            return
        if d - len(blocks) > n - i:
            return
        for b in blocks:
            b.append(items[i])
            yield from rec(i + 1)
            b.pop()
        if len(blocks) < d:
            blocks.append([items[i]])
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(0)


def _distribute(items, sizes):
    """Ways to fill blocks of the given sizes with ``items`` (in order)."""
    n = len(items)
    fill: list[list] = [[] for _ in sizes]

    def rec(i):
        if i == n:
            yield [tuple(b) for b in fill]
            return
        for b, size in enumerate(sizes):
            if len(fill[b]) < size:
                fill[b].append(items[i])
                yield from rec(i + 1)
                fill[b].pop()

    yield from rec(0)


def enumerate_balanced_partitions(s_only, t_only, d: int) -> Iterator[list]:
    """Partitions of s_only ∪ t_only into d groups, each balanced and non-empty.

    Each partition is a list of (sources, sinks) pairs.
    """
    s_items, t_items = sorted(s_only), sorted(t_only)
    if len(s_items) != len(t_items):
        raise InputError("s_only and t_only differ in size")
    if d < 1 or d > len(s_items):
        return
    for blocks in _set_partitions(s_items, d):
        for sinks in _distribute(t_items, [len(b) for b in blocks]):
            yield list(zip(blocks, sinks))


# ---------------------------------------------------------------- tree scheduling

def _tree_vertices(tree: Graph, extra=()):
    vs = {v for v in range(tree.vertex_count) if tree.underlying[v]}
    vs.update(extra)
    return vs


def _check_tree(tree: Graph, vertices) -> None:
    if not is_forest(tree):
        raise InputError("input graph has a cycle")
    if vertices:
        start = min(vertices)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in tree.underlying[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if not vertices <= seen:
            raise InputError("input graph is not connected")


def _tree_path(tree: Graph, occupied, s, t):
    return find_free_path(tree, occupied, s, t)


def schedule_tree_bounded(
    tree: Graph, s_in_tree: Sequence[int], t_in_tree: Sequence[int]
) -> Optional[MoveSequence]:
    """Sequence on ``tree`` moving every token exactly once, or None.

    The search first insists that the moves use every tree edge (so the
    induced graph is the whole tree) and relaxes that if it fails.
    """
    s_set, t_set = frozenset(s_in_tree), frozenset(t_in_tree)
    if len(s_set) != len(t_set):
        raise InputError("configurations differ in size")
    vertices = _tree_vertices(tree, s_set | t_set)
    _check_tree(tree, vertices)
    tokens = len(s_set)
    all_edges = frozenset(tree.edges()) if not tree.directed else frozenset(tree.edges())

    def key(a, b):
        return (a, b) if tree.directed else (min(a, b), max(a, b))

    for cover in (True, False):
        failed = set()

        def dfs(occ, moved, used, depth):
            if depth == tokens:
                if occ == t_set and (not cover or used == all_edges):
                    return []
                return None
            state = (occ, moved, used if cover else None)
            if state in failed:
                return None
            for s in sorted(occ - moved):
                for t in sorted(t_set - occ):
                    path = _tree_path(tree, occ, s, t)
                    if path is None:
                        continue
                    new_used = used | {key(a, b) for a, b in zip(path, path[1:])}
                    rest = dfs((occ - {s}) | {t}, moved | {t}, new_used, depth + 1)
                    if rest is not None:
                        return [Move(s, t, tuple(path))] + rest
            failed.add(state)
            return None

        found = dfs(s_set, frozenset(), frozenset(), 0)
        if found is not None:
            return MoveSequence(found)
    return None


def _directed_path(adj, alive, u, v):
    parent = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in adj[x]:
            if y in alive and y not in parent:
                parent[y] = x
                queue.append(y)
    if v not in parent:
        return None
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def schedule_directed_tree(
    tree: Graph, s_in_tree: Sequence[int], t_in_tree: Sequence[int], mapping: dict
) -> MoveSequence:
    """Transforming sequence on a directed tree, by induction on its size.

    ``mapping`` pairs every source with a distinct target reachable from it.
    A free target leaf is filled first from the nearest token on its
    pairing path; otherwise a source leaf is held back and moved last.
    """
    if not tree.directed:
        raise InputError("expected a directed tree")
    S, T = set(s_in_tree), set(t_in_tree)
    mu = dict(mapping)
    alive = _tree_vertices(tree, S | T)
    _check_tree(tree, alive)
    if set(mu) != S or set(mu.values()) != T or len(set(mu.values())) != len(mu):
        raise InputError("mapping is not a bijection from S to T")
    for s, t in mu.items():
        if s == t or _directed_path(tree.adjacency, alive, s, t) is None:
            raise InputError(f"no directed path from {s} to mapped target {t}")
    adj, radj = tree.adjacency, tree.in_adjacency

    def degree(v):
        return sum(1 for u in adj[v] if u in alive) + sum(1 for u in radj[v] if u in alive)

    def trim():
        changed = True
        while changed:
            changed = False
            for v in sorted(alive):
                if degree(v) <= 1 and v not in S and v not in T:
                    alive.discard(v)
                    changed = True

    before: list[Move] = []
    after: list[Move] = []  # moves appended after the rest, innermost first
    trim()
    while S:
        leaves = sorted(v for v in alive if degree(v) <= 1)
        fill = [v for v in leaves if v in T and v not in S]
        if fill:
            v = fill[0]
            u = next(s for s, t in mu.items() if t == v)
            path = _directed_path(adj, alive, u, v)
            w = next(x for x in reversed(path) if x in S)
            sub = path[path.index(w):]
            before.append(Move(w, v, tuple(sub)))
            if w != u:
                mu[u] = mu[w]
            del mu[w]
            S.discard(w)
            T.discard(v)
            alive.discard(v)
        else:
            u = next(v for v in leaves if v in S and v not in T)
            v = mu[u]
            path = _directed_path(adj, alive, u, v)
            w = next(x for x in path[1:] if x in T)
            after.append(Move(u, w, tuple(path[:path.index(w) + 1])))
            y = next((s for s, t in mu.items() if t == w), None)
            del mu[u]
            if w in S:
                x = mu[w]
                if y is not None and y != u:
                    mu[y] = x
                if w != v:
                    mu[w] = v
            elif y is not None and y != u:
                mu[y] = v
            S.discard(u)
            T.discard(w)
            alive.discard(u)
        trim()
    return MoveSequence(before + after[::-1])


# ---------------------------------------------------------------- Steiner-forest solver

def _plan_cost(tree: SteinerResult, s_only, obstacles) -> int:
    return len(tree.tree_vertices & s_only) + len(tree.tree_vertices & obstacles)


def _kernel_sets(kernel: Instance):
    s, t = frozenset(kernel.source), frozenset(kernel.target)
    return s - t, t - s, s & t


def find_partition_plan(kernel: Instance, threads: int = 1) -> Optional[PartitionPlan]:
    """First balanced partition (by increasing d) whose Steiner trees fit the budget."""
    s_only, t_only, obstacles = _kernel_sets(kernel)
    cache: dict = {}

    def tree_for(group):
        key = frozenset(group[0]) | frozenset(group[1])
        if key not in cache:
            cache[key] = min_steiner_tree(kernel.graph, key)
        return cache[key]

    def evaluate(partition):
        trees = []
        total = 0
        for group in partition:
            tree = tree_for(group)
            if tree is None:
                return None
            trees.append(tree)
            total += _plan_cost(tree, s_only, obstacles)
            if total > kernel.budget:
                return None
        return PartitionPlan(tuple(partition), tuple(trees), total)

    for d in range(1, min(kernel.budget, len(s_only)) + 1):
        partitions = enumerate_balanced_partitions(s_only, t_only, d)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for plan in pool.map(evaluate, list(partitions)):
                    if plan is not None:
                        return plan
        else:
            for partition in partitions:
                plan = evaluate(partition)
                if plan is not None:
                    return plan
    return None


def _disjoint(trees) -> bool:
    seen = set()
    for tree in trees:
        if seen & tree.tree_vertices:
            return False
        seen |= tree.tree_vertices
    return True


def _schedule_plan(kernel: Instance, plan: PartitionPlan) -> Optional[MoveSequence]:
    S, T = set(kernel.source), set(kernel.target)
    seq = MoveSequence()
    for tree in plan.trees:
        tree_graph = Graph.from_edges(kernel.graph.vertex_count, sorted(tree.tree_edges))
        part = schedule_tree_bounded(
            tree_graph,
            sorted(S & tree.tree_vertices),
            sorted(T & tree.tree_vertices),
        )
        if part is None:
            return None
        seq = seq + part
    return seq


def solve_uutm(instance: Instance, threads: int = 1) -> Solution:
    """Decide UUTM within budget via balanced partitions into Steiner trees."""
    if instance.variant != "UUTM":
        raise UnsupportedVariant(f"solve_uutm needs UUTM, got {instance.variant}")
    kernel, cmap = contract(instance)
    s_only, _, _ = _kernel_sets(kernel)
    if not s_only:
        empty = MoveSequence()
        return Solution(True, empty, "ell", kernel, empty)
    plan = find_partition_plan(kernel, threads)
    if plan is None:
        return Solution(False, None, "ell", kernel)
    kseq = None
    if _disjoint(plan.trees):
        kseq = _schedule_plan(kernel, plan)
    if kseq is None:
        kseq = _search_sequence(kernel)
    return Solution(True, lift_sequence(cmap, kseq), "ell", kernel, kseq, plan)


# ---------------------------------------------------------------- kernel search

def _shortest_once_length(kernel: Instance) -> Optional[int]:
    """Fewest moves within budget when every token moves at most once onto T."""
    g = kernel.graph
    S, T = frozenset(kernel.source), frozenset(kernel.target)
    s_only, _, obstacles = _kernel_sets(kernel)
    lo = len(s_only)
    hi = min(kernel.budget, len(s_only) + len(obstacles))
    failed: dict = {}

    def dfs(occ, moved, left):
        if occ == T:
            return True
        need = len(occ - T)
        if need > left:
            return False
        key = (occ, moved)
        if failed.get(key, -1) >= left:
            return False
        for s in sorted(occ - moved):
            for t in sorted(T - occ):
                if find_free_path(g, occ, s, t) is None:
                    continue
                if dfs((occ - {s}) | {t}, moved | {t}, left - 1):
                    return True
        failed[key] = left
        return False

    for length in range(lo, hi + 1):
        if dfs(S, frozenset(), length):
            return length
    return None


def _simple_free_paths(g: Graph, occ, s, t, limit=64):
    out = []
    stack = [(s, [s])]
    while stack and len(out) < limit:
        u, path = stack.pop()
        for v in reversed(g.adjacency[u]):
            if v in path:
                continue
            if v == t:
                out.append(path + [v])
            elif v not in occ:
                stack.append((v, path + [v]))
    out.sort(key=lambda p: (len(p), p))
    return out


def _forest_search(kernel: Instance, length: int) -> Optional[MoveSequence]:
    """A sequence of exactly ``length`` moves whose induced graph is a forest
    with every leaf in the symmetric difference."""
    g = kernel.graph
    S, T = frozenset(kernel.source), frozenset(kernel.target)
    sym = S ^ T

    def key(a, b):
        return (a, b) if g.directed else (min(a, b), max(a, b))

    def acyclic(edges):
        return is_forest(Graph.from_edges(g.vertex_count, sorted(edges), g.directed))

    def dfs(occ, moved, used, left):
        if occ == T:
            induced = Graph.from_edges(g.vertex_count, sorted(used), g.directed)
            leaves = {v for v in range(g.vertex_count) if len(induced.underlying[v]) == 1}
            return [] if leaves <= sym else None
        if left == 0 or len(occ - T) > left:
            return None
        for s in sorted(occ - moved):
            for t in sorted(T - occ):
                for path in _simple_free_paths(g, occ, s, t):
                    new_used = used | {key(a, b) for a, b in zip(path, path[1:])}
                    if not acyclic(new_used):
                        continue
                    rest = dfs((occ - {s}) | {t}, moved | {t}, new_used, left - 1)
                    if rest is not None:
                        return [Move(s, t, tuple(path))] + rest
        return None

    found = dfs(S, frozenset(), frozenset(), length)
    return MoveSequence(found) if found is not None else None


def _canonical_sequence(kernel: Instance, length: int) -> MoveSequence:
    g = kernel.graph
    T = frozenset(kernel.target)

    def dfs(occ, moved, left):
        if occ == T:
            return []
        if len(occ - T) > left:
            return None
        for s in sorted(occ - moved):
            for t in sorted(T - occ):
                path = find_free_path(g, occ, s, t)
                if path is None:
                    continue
                rest = dfs((occ - {s}) | {t}, moved | {t}, left - 1)
                if rest is not None:
                    return [Move(s, t, tuple(path))] + rest
        return None

    return MoveSequence(dfs(frozenset(kernel.source), frozenset(), length))


def _search_sequence(kernel: Instance) -> Optional[MoveSequence]:
    length = _shortest_once_length(kernel)
    if length is None:
        return None
    seq = _forest_search(kernel, length)
    if seq is None:
        seq = _canonical_sequence(kernel, length)
    return seq


def solve_by_k(instance: Instance) -> Solution:
    """Exhaustive move-once search on the kernel (unlabelled, either direction)."""
    if instance.labelled:
        raise UnsupportedVariant("solve_by_k handles unlabelled variants only")
    kernel, cmap = contract(instance)
    kseq = _search_sequence(kernel)
    if kseq is None:
        return Solution(False, None, "k", kernel)
    return Solution(True, lift_sequence(cmap, kseq), "k", kernel, kseq)


def kernel_forest_ok(kernel: Instance, kseq: MoveSequence) -> bool:
    """Induced graph of ``kseq`` is a forest whose leaves lie in S Δ T."""
    induced = induced_move_graph(kernel.graph, kseq)
    if not is_forest(induced):
        return False
    sym = set(kernel.source) ^ set(kernel.target)
    return all(
        v in sym for v in range(induced.vertex_count) if len(induced.underlying[v]) == 1
    )
