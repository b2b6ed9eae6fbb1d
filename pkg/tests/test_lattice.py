import random

import pytest

from topozx.diagram import X, Z
from topozx.errors import InputError
from topozx.lattice import (
    GREEN_CENTRE,
    RED_CENTRE,
    build_from_spec,
    build_graph_state,
    build_unit_cell,
    cell_sites,
    site_neighbours,
    tile_lattice,
    two_coloured,
)
from topozx.semantics import equiv_up_to_scalar, evaluate


def test_unit_cell_has_eighteen_sites():
    assert len(cell_sites()) == 18
    assert len(build_unit_cell().site_index) == 18


def test_two_cells_share_a_face_layer():
    assert len(tile_lattice(2, 1, 1).site_index) == 31


def test_conventions_swap_colours():
    red = build_unit_cell(RED_CENTRE)
    green = build_unit_cell(GREEN_CENTRE)
    for s, v in red.site_index.items():
        a, b = red.diagram.type(v), green.diagram.type(green.site_index[s])
        assert {a, b} == {Z, X}
    faces = [s for s in red.site_index if sum(c % 2 for c in s) == 2]
    assert all(red.diagram.type(red.site_index[s]) == X for s in faces)


def test_edges_join_face_and_edge_sites():
    cell = build_unit_cell()
    d = cell.diagram
    for s, v in cell.site_index.items():
        for n in site_neighbours(s):
            if n in cell.site_index:
                assert d.type(v) != d.type(cell.site_index[n])


def test_colourings_agree_on_graph_states():
    rng = random.Random(3)
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
    build = build_graph_state((list(range(4)), edges))
    t = evaluate(build.diagram)
    for conv in (RED_CENTRE, GREEN_CENTRE):
        assert equiv_up_to_scalar(evaluate(two_coloured(build, conv).diagram), t).equivalent


def test_site_cap_is_enforced():
    with pytest.raises(Exception):
        tile_lattice(5, 5, 5, cap=100)


def test_bad_spec_is_input_error():
    with pytest.raises(InputError):
        build_from_spec({"cells": [1, -1, 1]})
    with pytest.raises(InputError):
        build_from_spec({"cells": [1, 1, 1], "convention": "purple"})
