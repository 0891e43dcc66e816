import pytest

from tokenmove.errors import InputError, MapMismatch, UnsupportedVariant
from tokenmove.graph import Graph, Instance, Move, validate_sequence
from tokenmove.oracle import decide, shortest_transforming_sequence
from tokenmove.preprocess import (
    ContractionMap, contract, is_contracted, lift_sequence, prune_obstacles,
    prune_obstacles_with_map, subdivide, to_max_degree_three,
)

from instances import random_instance, rng

P3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def test_contract_examples():
    kernel, cmap = contract(Instance(P3, False, [0], [2], 1))
    assert kernel.graph.vertex_count == 2 and kernel.graph.edges() == [(0, 1)]
    assert cmap.kept_vertices == (0, 2) and cmap.path_for(0, 1) == (0, 1, 2)
    arc = Graph.from_edges(3, [(0, 1), (1, 2)], True)
    kernel, cmap = contract(Instance(arc, False, [0], [2], 1))
    assert kernel.graph.directed and kernel.graph.edges() == [(0, 1)]
    assert cmap.path_for(0, 1) == (0, 1, 2)
    with pytest.raises(MapMismatch):
        cmap.path_for(1, 0)


def test_contract_identity_on_contracted():
    inst = Instance(P3, False, [0, 1], [1, 2], 2)
    kernel, cmap = contract(inst)
    assert kernel.graph.edges() == inst.graph.edges()
    assert (kernel.source, kernel.target) == (inst.source, inst.target)
    assert cmap.kept_vertices == (0, 1, 2) and cmap.shortcuts() == []


def test_contract_rejects_labelled():
    with pytest.raises(UnsupportedVariant):
        contract(Instance(P3, True, [0], [2], 1))


def test_lift_examples():
    _, cmap = contract(Instance(P3, False, [0], [2], 1))
    lifted = lift_sequence(cmap, [Move(0, 1, (0, 1))])
    assert lifted[0].path == (0, 1, 2)
    ident = ContractionMap((0, 1), {(0, 1): (0, 1), (1, 0): (1, 0)})
    assert lift_sequence(ident, [Move(1, 0, (1, 0))])[0].path == (1, 0)
    with pytest.raises(MapMismatch):
        lift_sequence(ident, [Move(0, 1, (0, 1)), Move(1, 2, (1, 2))])


def test_kernel_size_and_provenance():
    r = rng(1)
    for _ in range(200):
        inst = random_instance(r, (2, 9), k_max=4, directed=r.random() < 0.5)
        kernel, cmap = contract(inst)
        assert kernel.graph.vertex_count <= 2 * inst.k
        assert is_contracted(kernel)
        assert kernel.provenance[-1] == "contract"
        for _, _, path in cmap.shortcuts():
            inner = path[1:-1]
            assert not set(inner) & (set(inst.source) | set(inst.target))


def test_lift_validates_on_original():
    r = rng(2)
    for _ in range(300):
        inst = random_instance(r, (2, 9), k_max=3, directed=r.random() < 0.5)
        kernel, cmap = contract(inst)
        res = shortest_transforming_sequence(kernel)
        if res.reachable:
            assert validate_sequence(inst, lift_sequence(cmap, res.witness)).reaches_target


def test_prune_examples():
    # arc s->t plus an isolated obstacle
    g = Graph.from_edges(3, [(0, 1)], True)
    pruned = prune_obstacles(Instance(g, False, [0, 2], [1, 2], 1))
    assert pruned.graph.vertex_count == 2 and pruned.provenance[-1] == "prune"
    # obstacle on the only s->t path stays
    g = Graph.from_edges(3, [(0, 1), (1, 2)], True)
    pruned = prune_obstacles(Instance(g, False, [0, 1], [1, 2], 2))
    assert pruned.graph.vertex_count == 3


def test_prune_counts_obstacles_along_paths():
    # s -> o1 -> o2 -> t: reaching o2 from s passes two obstacles
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], True)
    inst = Instance(g, False, [0, 1, 2], [1, 2, 3], 1)
    _, kept = prune_obstacles_with_map(inst)
    assert kept == (0, 1, 2, 3)
    assert not decide(inst)


def test_prune_errors():
    with pytest.raises(UnsupportedVariant):
        prune_obstacles(Instance(P3, False, [0, 1], [1, 2], 1))
    g = Graph.from_edges(3, [(0, 1), (1, 2)], True)
    with pytest.raises(UnsupportedVariant):
        prune_obstacles(Instance(g, False, [0], [2], 1))


def test_degree_three_examples():
    # in-degree 1, out-degree 2 -> gadget path of 4 vertices
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)], True)
    out, central = to_max_degree_three(Instance(g, False, [0], [2], 2))
    # gadget sizes: 0 -> 2, 1 -> 4, 2 -> 2, 3 -> 2
    assert out.graph.vertex_count == 10
    assert central == (0, 3, 7, 9)
    assert [(u, v) for u, v in out.graph.edges() if 2 <= u < 6 and 2 <= v < 6] == [(2, 3), (3, 4), (4, 5)]
    arc = Graph.from_edges(2, [(0, 1)], True)
    out, central = to_max_degree_three(Instance(arc, False, [0], [1], 1))
    assert out.graph.vertex_count == 4
    assert all(len(a) <= 3 for a in out.graph.underlying)
    assert out.source == (central[0],) and out.target == (central[1],)


def test_degree_three_errors():
    with pytest.raises(UnsupportedVariant):
        to_max_degree_three(Instance(P3, False, [0], [2], 1))


def test_subdivide_examples():
    p2 = Graph.from_edges(2, [(0, 1)])
    out = subdivide(Instance(p2, False, [0], [1], 1), 1)
    assert out.graph.edges() == [(0, 2), (1, 2)]
    arc = Graph.from_edges(2, [(0, 1)], True)
    out = subdivide(Instance(arc, False, [0], [1], 1), 2)
    assert out.graph.edges() == [(0, 2), (2, 3), (3, 1)]
    with pytest.raises(InputError):
        subdivide(Instance(p2, False, [0], [1], 1), 0)


def test_transforms_compose_and_record_chain():
    arc = Graph.from_edges(3, [(0, 1), (1, 2)], True)
    inst = Instance(arc, False, [0], [2], 1)
    kernel, _ = contract(inst)
    out, _ = to_max_degree_three(kernel)
    out = subdivide(out, 2)
    assert out.provenance == ("contract", "degree3", "subdivide:2")
    assert shortest_transforming_sequence(out).shortest_length == 1
