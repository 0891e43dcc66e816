import pytest

from tokenmove.errors import CapExceeded, UnsupportedVariant
from tokenmove.graph import Graph, Instance, validate_sequence
from tokenmove.oracle import decide, shortest_move_once, shortest_transforming_sequence, state_space_size

from instances import random_instance, rng

P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
P5 = Graph.from_edges(5, [(i, i + 1) for i in range(4)])
C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_shortest_examples():
    assert shortest_transforming_sequence(Instance(P3, False, [0], [2], 0)).shortest_length == 1
    assert shortest_transforming_sequence(Instance(P5, False, [1, 3], [0, 4], 0)).shortest_length == 2
    assert shortest_transforming_sequence(Instance(C4, True, [0, 2], [2, 0], 0)).shortest_length == 3


def test_move_once_examples():
    assert shortest_move_once(Instance(P3, False, [0], [2], 0)).shortest_length == 1
    assert shortest_move_once(Instance(P5, False, [1, 3], [0, 4], 0)).shortest_length == 2


def test_move_once_rejects_labelled():
    with pytest.raises(UnsupportedVariant):
        shortest_move_once(Instance(P3, True, [0], [2], 0))


def test_unreachable_and_trivial():
    two = Graph.from_edges(2, [])
    res = shortest_transforming_sequence(Instance(two, False, [0], [1], 5))
    assert (res.reachable, res.shortest_length, res.witness) == (False, None, None)
    res = shortest_transforming_sequence(Instance(P3, False, [1], [1], 0))
    assert res.reachable and res.shortest_length == 0 and len(res.witness) == 0
    # labelled tokens cannot swap along a path
    assert not shortest_transforming_sequence(Instance(P3, True, [0, 2], [2, 0], 0)).reachable


def test_cap_refusal_names_cap():
    big = Graph.from_edges(30, [(i, i + 1) for i in range(29)])
    inst = Instance(big, True, list(range(8)), list(range(22, 30)), 20)
    assert state_space_size(inst) > 10**7
    with pytest.raises(CapExceeded, match="cap 1000") as info:
        shortest_transforming_sequence(inst, cap=1000)
    assert info.value.cap == 1000 and info.value.predicted == state_space_size(inst)


def test_max_length_bounds_search():
    inst = Instance(P5, False, [1, 3], [0, 4], 1)
    assert not decide(inst)
    assert decide(Instance(P5, False, [1, 3], [0, 4], 2))


def test_witness_invariants_and_symmetry():
    r = rng(21)
    for _ in range(300):
        inst = random_instance(r, (2, 7), labelled=r.random() < 0.3, directed=r.random() < 0.3)
        res = shortest_transforming_sequence(inst)
        assert res.reachable == (res.shortest_length is not None) == (res.witness is not None)
        if res.reachable:
            assert len(res.witness) == res.shortest_length
            assert validate_sequence(inst, res.witness).reaches_target
        if not inst.directed and not inst.labelled:
            back = Instance(inst.graph, False, inst.target, inst.source, 0)
            assert shortest_transforming_sequence(back).shortest_length == res.shortest_length


def test_optimality_against_depth_limited_search():
    # no sequence of length shortest-1 reaches the target: checked by an independent naive search
    from tokenmove.graph import apply_move, find_free_path, Move

    def naive(inst, depth):
        goal = frozenset(inst.target)
        frontier = {frozenset(inst.source)}
        for d in range(depth + 1):
            if goal in frontier:
                return d
            nxt = set()
            for conf in frontier:
                for s in conf:
                    for t in range(inst.graph.vertex_count):
                        if t not in conf and find_free_path(inst.graph, set(conf), s, t):
                            nxt.add(frozenset(apply_move(tuple(conf), Move(s, t, (s, t)))))
            frontier = nxt
        return None

    r = rng(5)
    for _ in range(100):
        inst = random_instance(r, (2, 6))
        length = shortest_transforming_sequence(inst).shortest_length
        assert naive(inst, 6) == length
