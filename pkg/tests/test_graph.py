import pytest

from tokenmove.errors import InputError, MoveError
from tokenmove.graph import (
    Graph, Instance, Move, MoveSequence, RangePath, apply_move, find_free_path,
    induced_move_graph, instance_stats, is_forest, validate_sequence,
)
from tokenmove.oracle import shortest_transforming_sequence

from instances import random_instance, rng

P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
P4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


def test_graph_rejects_self_loops_and_duplicates():
    with pytest.raises(InputError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(InputError):
        Graph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(InputError):
        Graph.from_edges(2, [(0, 2)])


def test_instance_requires_equal_sizes():
    with pytest.raises(InputError):
        Instance(P3, False, [0, 1], [2], 1)
    with pytest.raises(InputError):
        Instance(P3, False, [0, 0], [1, 2], 1)


def test_find_free_path_examples():
    assert find_free_path(P3, {0}, 0, 2) == [0, 1, 2]
    assert find_free_path(P3, {0, 1}, 0, 2) is None
    cyc = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)], True)
    assert find_free_path(cyc, {0}, 0, 2) == [0, 1, 2]


def test_find_free_path_errors():
    with pytest.raises(InputError):
        find_free_path(P3, set(), 0, 5)
    with pytest.raises(InputError):
        find_free_path(P3, set(), 1, 1)


def test_find_free_path_prefers_lowest_index():
    square = Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert find_free_path(square, set(), 0, 3) == [0, 1, 3]


def test_apply_move_examples():
    assert set(apply_move((0,), Move(0, 2, (0, 1, 2)))) == {2}
    assert apply_move((0, 3), Move(3, 1, (3, 2, 1))) == (0, 1)
    with pytest.raises(MoveError, match="no token on source"):
        apply_move((0, 1), Move(2, 3, (2, 3)))
    with pytest.raises(MoveError, match="occupied"):
        apply_move((0, 1), Move(0, 1, (0, 1)))


def test_validate_examples():
    inst = Instance(P3, False, [0], [2], 1)
    assert validate_sequence(inst, [Move(0, 2, (0, 1, 2))]).kind == "valid_reaches_target"
    inst = Instance(P4, False, [0, 1], [2, 3], 2)
    seq = [Move(1, 3, (1, 2, 3)), Move(0, 2, (0, 1, 2))]
    assert validate_sequence(inst, seq).reaches_target
    assert shortest_transforming_sequence(inst).shortest_length == 2
    p2 = Graph.from_edges(2, [(0, 1)])
    v = validate_sequence(Instance(p2, True, [0, 1], [1, 0], 3), [Move(0, 1, (0, 1))])
    assert (v.kind, v.index, v.reason) == ("invalid", 0, "target occupied")


def test_validate_reasons():
    inst = Instance(P4, False, [0, 1], [2, 3], 2)
    assert validate_sequence(inst, [Move(0, 2, (0, 1, 2))]).reason == "path blocked at 1"
    assert validate_sequence(inst, [Move(1, 3, (1, 3))]).reason == "path uses non-edge 1-3"
    assert validate_sequence(inst, [Move(2, 3, (2, 3))]).reason == "no token on source"
    assert validate_sequence(inst, [Move(1, 2, (1, 2))]).kind == "valid_wrong_final"
    lab = Instance(P3, True, [0, 2], [1, 2], 1)
    assert validate_sequence(lab, [Move(0, 1, (0, 1), label=1)]).reason == "label mismatch"


def test_validate_lenient_ignores_stored_path():
    inst = Instance(P4, False, [0], [3], 1)
    bad_path = [Move(0, 3, (0, 3))]
    assert not validate_sequence(inst, bad_path).reaches_target
    assert validate_sequence(inst, bad_path, lenient=True).reaches_target
    blocked = Instance(P4, False, [0, 1], [3, 1], 1)
    assert validate_sequence(blocked, bad_path, lenient=True).reason == "no free path"


def test_labelled_final_check_uses_labels():
    inst = Instance(P4, True, [0, 3], [3, 0], 10)
    # tokens cannot pass each other on a path: any reachable final keeps the order
    seq = [Move(3, 2, (3, 2)), Move(0, 1, (0, 1))]
    assert validate_sequence(inst, seq).kind == "valid_wrong_final"


def test_induced_move_graph_examples():
    g = induced_move_graph(P3, [Move(0, 2, (0, 1, 2))])
    assert g.edges() == [(0, 1), (1, 2)]
    assert induced_move_graph(P3, []).edge_count == 0
    p6 = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (2, 3)])
    two = induced_move_graph(p6, [Move(0, 2, (0, 1, 2)), Move(3, 5, (3, 4, 5))])
    assert two.edges() == [(0, 1), (1, 2), (3, 4), (4, 5)]
    with pytest.raises(InputError):
        induced_move_graph(P3, [Move(0, 2, (0, 2))])


def test_induced_move_graph_monotone():
    r = rng(3)
    for _ in range(50):
        inst = random_instance(r, (3, 7))
        res = shortest_transforming_sequence(inst)
        if not res.reachable or len(res.witness) < 2:
            continue
        seq = list(res.witness)
        small = set(induced_move_graph(inst.graph, seq[:1]).edges())
        big = set(induced_move_graph(inst.graph, seq).edges())
        assert small <= big


def test_instance_stats_examples():
    st = instance_stats(Instance(P3, False, [0], [2], 1))
    assert (st.k, st.obstacles, st.symmetric_difference, st.f) == (1, frozenset(), {0, 2}, 1)
    st = instance_stats(Instance(P3, False, [0, 1], [0, 1], 0))
    assert (st.k, st.obstacles, st.symmetric_difference, st.f) == (2, {0, 1}, frozenset(), 1)
    k4 = Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    st = instance_stats(Instance(k4, False, [0, 1], [1, 2], 1))
    assert (st.k, st.obstacles, st.symmetric_difference, st.f) == (2, {1}, {0, 2}, 1)


def test_replay_soundness_and_path_honesty():
    r = rng(8)
    for _ in range(200):
        inst = random_instance(r, (2, 7), labelled=r.random() < 0.5)
        res = shortest_transforming_sequence(inst)
        if not res.reachable:
            continue
        assert validate_sequence(inst, res.witness).reaches_target
        conf = tuple(inst.source)
        for m in res.witness:
            conf = apply_move(conf, m)
        if inst.labelled:
            assert conf == inst.target
        else:
            assert set(conf) == set(inst.target)
        # blocking any intermediate vertex of some move must be rejected
        for i, m in enumerate(res.witness):
            if len(m.path) > 2:
                seq = list(res.witness)
                before = seq[:i]
                conf = tuple(inst.source)
                for mm in before:
                    conf = apply_move(conf, mm)
                mid = m.path[1]
                assert mid not in conf
                break


def test_range_path_behaves_like_a_tuple():
    p = RangePath(range(5, 2, -1), 9, range(10, 12))
    assert tuple(p) == (5, 4, 3, 9, 10, 11)
    assert len(p) == 6 and p[0] == 5 and p[-1] == 11 and p[3] == 9
    assert p == (5, 4, 3, 9, 10, 11)
    assert p.is_simple()
    assert not RangePath(range(0, 5), range(3, 1, -1)).is_simple()
    m = Move(5, 11, p)
    assert m.path is p
    with pytest.raises(InputError):
        Move(0, 3, RangePath(range(0, 3), range(2, 4)))


def test_long_paths_checked_like_short_ones():
    n = 300
    line = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    inst = Instance(line, False, [0, 150], [299, 150], 1)
    long_move = Move(0, 299, RangePath(range(0, 300)))
    v = validate_sequence(inst, [long_move])
    assert v.reason == "path blocked at 150"
    inst = Instance(line, False, [0], [299], 1)
    assert validate_sequence(inst, [long_move]).reaches_target
    assert validate_sequence(inst, [Move(0, 299, tuple(range(300)))]).reaches_target
    gap = Move(0, 299, RangePath(range(0, 100), range(101, 300)))
    assert validate_sequence(inst, [gap]).reason == "path uses non-edge 99-101"


def test_is_forest():
    assert is_forest(P4)
    assert not is_forest(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
    assert not is_forest(Graph.from_edges(2, [(0, 1), (1, 0)], True))
    assert is_forest(Graph.from_edges(3, [(0, 1), (2, 1)], True))


def test_move_sequence_concat():
    a = MoveSequence([Move(0, 1, (0, 1))])
    b = MoveSequence([Move(1, 2, (1, 2))])
    assert len(a + b) == 2 and (a + b)[1].target_vertex == 2
