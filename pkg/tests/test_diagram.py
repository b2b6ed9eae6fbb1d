import random

import pytest
from hypothesis import given, settings, strategies as st

from diagram_gen import random_diagram
from topozx import catalog
from topozx.diagram import B, H, X, Z, Diagram, DiagramBuilder, compose_parallel, compose_sequential, validate
from topozx.errors import CompositionError, InputError, ValidationError
from topozx.semantics import equiv_up_to_scalar, evaluate

seeds = st.integers(min_value=0, max_value=10**6)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_json_round_trip(seed):
    d = random_diagram(random.Random(seed))
    again = Diagram.from_json(d.to_json())
    assert again.to_json() == d.to_json()


def test_hadamard_degree_is_checked():
    b = DiagramBuilder()
    h = b.h()
    z = b.z()
    b.add_edge(h, z)
    with pytest.raises(ValidationError):
        b.freeze()
    assert validate(b.freeze(check=False)) is not None


def test_unlisted_boundary_is_rejected():
    b = DiagramBuilder()
    v = b.boundary()
    b.add_edge(v, b.z())
    with pytest.raises(ValidationError):
        b.freeze()


def test_malformed_json_is_an_input_error():
    with pytest.raises(InputError):
        Diagram.from_json({"vertices": "nope"})


def test_sequential_composition_matches_matrix_product():
    cx = catalog.cnot()
    twice = compose_sequential(cx, cx)
    ident = compose_parallel(catalog.wire(), catalog.wire())
    assert equiv_up_to_scalar(evaluate(twice), evaluate(ident)).equivalent


def test_composition_checks_arity():
    with pytest.raises(CompositionError):
        compose_sequential(catalog.cnot(), catalog.wire())


def test_parallel_composition_is_kronecker():
    a, b = catalog.single_spider(Z, 1), catalog.single_spider(X, 1)
    par = compose_parallel(a, b)
    assert par.n_inputs == 2 and par.n_outputs == 2
    want = evaluate(a).kron(evaluate(b))
    assert equiv_up_to_scalar(evaluate(par), want).equivalent


def test_measure_counts_vertices_edges_hadamards():
    d = catalog.double_hadamard()
    v, e, h = d.measure()
    assert h == 2 and v == len(d) and e == d.num_edges()


def test_colour_swap_exchanges_spiders():
    d = catalog.cnot()
    s = d.colour_swap()
    assert s.count(Z) == d.count(X) and s.count(X) == d.count(Z)
