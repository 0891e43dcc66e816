"""Exhaustive breadth-first search over configurations.

This is the ground truth the faster solvers are checked against.  It is
exponential in ``k`` and guarded by a state-space cap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb, perm
from typing import Optional

from .errors import CapExceeded, UnsupportedVariant
from .graph import Instance, Move, MoveSequence, find_free_path

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class OracleResult:
    reachable: bool
    shortest_length: Optional[int] = None
    witness: Optional[MoveSequence] = None


def state_space_size(instance: Instance) -> int:
    n, k = instance.graph.vertex_count, instance.k
    return perm(n, k) if instance.labelled else comb(n, k)


def _check_cap(instance: Instance, cap: int) -> None:
    size = state_space_size(instance)
    if size > cap:
        raise CapExceeded(
            f"state space {size} exceeds cap {cap}", cap=cap, predicted=size
        )


def _free_region(adj, occupied, start):
    """Free vertices reachable from ``start`` through free vertices only."""
    seen = {start}
    out = []
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in seen or v in occupied:
                continue
            seen.add(v)
            out.append(v)
            queue.append(v)
    return out


def _canon(instance: Instance, conf):
    return tuple(conf) if instance.labelled else tuple(sorted(conf))


def _rebuild(instance, parents, state):
    steps = []
    while parents[state] is not None:
        prev, s, t, label = parents[state]
        steps.append((prev, s, t, label))
        state = prev
    moves = []
    for prev, s, t, label in reversed(steps):
        path = find_free_path(instance.graph, set(prev), s, t)
        moves.append(Move(s, t, tuple(path), label))
    return MoveSequence(moves)


def shortest_transforming_sequence(
    instance: Instance, cap: int = DEFAULT_CAP, max_length: Optional[int] = None
) -> OracleResult:
    """Exact shortest transforming sequence, ignoring the budget.

    With ``max_length`` the search stops after that depth and reports
    unreachable if the target was not met (used for budget decisions).
    """
    _check_cap(instance, cap)
    adj = instance.graph.adjacency
    start = _canon(instance, instance.source)
    goal = _canon(instance, instance.target)
    parents = {start: None}
    frontier = [start]
    depth = 0
    if start == goal:
        return OracleResult(True, 0, MoveSequence())
    while frontier:
        if max_length is not None and depth >= max_length:
            break
        depth += 1
        nxt = []
        for state in frontier:
            occupied = set(state)
            for label, s in enumerate(state):
                for t in _free_region(adj, occupied, s):
                    conf = list(state)
                    conf[label] = t
                    new = _canon(instance, conf)
                    if new in parents:
                        continue
                    parents[new] = (state, s, t, label if instance.labelled else None)
                    if new == goal:
                        return OracleResult(True, depth, _rebuild(instance, parents, new))
                    nxt.append(new)
        frontier = nxt
    return OracleResult(False)


def shortest_move_once(instance: Instance, cap: int = DEFAULT_CAP) -> OracleResult:
    """Shortest sequence in which no token moves twice (unlabelled only).

    States carry the set of positions held by tokens that have already moved.
    """
    if instance.labelled:
        raise UnsupportedVariant("move-once search is defined for unlabelled variants")
    _check_cap(instance, cap)
    adj = instance.graph.adjacency
    start = (tuple(sorted(instance.source)), frozenset())
    goal = frozenset(instance.target)
    if set(instance.source) == goal:
        return OracleResult(True, 0, MoveSequence())
    parents = {start: None}
    frontier = [start]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for state in frontier:
            conf, moved = state
            occupied = set(conf)
            for s in conf:
                if s in moved:
                    continue
                for t in _free_region(adj, occupied, s):
                    new_conf = tuple(sorted((occupied - {s}) | {t}))
                    new = (new_conf, moved | {t})
                    if new in parents:
                        continue
                    parents[new] = (state, s, t)
                    if frozenset(new_conf) == goal:
                        return OracleResult(True, depth, _rebuild_once(instance, parents, new))
                    nxt.append(new)
        frontier = nxt
    return OracleResult(False)


def _rebuild_once(instance, parents, state):
    steps = []
    while parents[state] is not None:
        prev, s, t = parents[state]
        steps.append((prev[0], s, t))
        state = prev
    moves = []
    for conf, s, t in reversed(steps):
        moves.append(Move(s, t, tuple(find_free_path(instance.graph, set(conf), s, t))))
    return MoveSequence(moves)


def decide(instance: Instance, cap: int = DEFAULT_CAP) -> bool:
    """Is there a transforming sequence of at most ``instance.budget`` moves?"""
    return shortest_transforming_sequence(instance, cap, max_length=instance.budget).reachable
