import pytest

from tokenmove.errors import InputError
from tokenmove.grid import GenerationError, GridSpec, gen_grid, grid_graph
from tokenmove.graph import instance_stats
from tokenmove.io import serialize_instance
from tokenmove.oracle import shortest_transforming_sequence
from tokenmove.unlabelled import solve_uutm


def test_grid_graph_shape():
    g = grid_graph(2, 3)
    assert g.vertex_count == 6 and g.edge_count == 7
    assert all(len(a) <= 4 for a in grid_graph(5, 5).adjacency)


def test_full_grid_identity():
    inst = gen_grid(GridSpec(2, 2, 1.0, target_shape="full"))
    assert set(inst.source) == set(inst.target) == {0, 1, 2, 3}
    assert instance_stats(inst).symmetric_difference == frozenset()


def test_seeded_determinism():
    a = serialize_instance(gen_grid(GridSpec(4, 4, 0.5, seed=7)))
    b = serialize_instance(gen_grid(GridSpec(4, 4, 0.5, seed=7)))
    c = serialize_instance(gen_grid(GridSpec(4, 4, 0.5, seed=8)))
    assert a == b and a != c


def test_centered_block_and_default_budget():
    inst = gen_grid(GridSpec(5, 5, 0.4, seed=3))
    k = inst.k
    s, t = set(inst.source), set(inst.target)
    assert len(t) == k and inst.budget == len(s ^ t) + len(s & t)
    rows = {v // 5 for v in t}
    cols = {v % 5 for v in t}
    assert max(rows) - min(rows) <= max(cols) - min(cols) + 1
    assert inst.provenance == ("grid:5x5:seed3",)


def test_custom_target_trims_in_row_major_order():
    inst = gen_grid(GridSpec(3, 3, 1.0, target_shape=(4,)))
    assert inst.source == (0,) and inst.target == (4,)


def test_errors():
    with pytest.raises(InputError):
        GridSpec(0, 3)
    with pytest.raises(InputError):
        GridSpec(2, 2, 1.5)
    with pytest.raises(InputError):
        GridSpec(2, 2, variant="UDTM")
    with pytest.raises(GenerationError):
        gen_grid(GridSpec(2, 2, 0.0, target_shape=(0, 1)))
    with pytest.raises(GenerationError):
        gen_grid(GridSpec(2, 2, 1.0, target_shape=(0, 9)))


def test_labelled_variant():
    inst = gen_grid(GridSpec(3, 3, 0.5, seed=1, variant="LUTM"))
    assert inst.labelled and inst.variant == "LUTM"


def test_solver_matches_oracle_on_small_grids():
    checked = 0
    for seed in range(60):
        for rows, cols in ((2, 3), (3, 3), (3, 4), (2, 6)):
            inst = gen_grid(GridSpec(rows, cols, 0.3, seed=seed, budget=seed % 6))
            if inst.k > 4 or inst.k == 0:
                continue
            length = shortest_transforming_sequence(inst).shortest_length
            assert solve_uutm(inst).decision == (length is not None and length <= inst.budget)
            checked += 1
    assert checked > 100
