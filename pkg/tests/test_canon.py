import random

from hypothesis import given, settings, strategies as st

from diagram_gen import random_diagram
from topozx import catalog
from topozx.canon import canonical_hash, canonical_order, isomorphic

seeds = st.integers(min_value=0, max_value=10**6)


def _shuffled(d, rng):
    ids = d.vertices()
    new = rng.sample(range(1000, 1000 + 3 * len(ids)), len(ids))
    return d.relabel(dict(zip(ids, new)))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_hash_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    d = random_diagram(rng)
    e = _shuffled(d, rng)
    assert canonical_hash(d) == canonical_hash(e)
    ok, mapping = isomorphic(d, e)
    assert ok
    assert {mapping[v] for v in d.vertices()} == set(e.vertices())


def test_distinguishes_phases_and_colours():
    z = catalog.single_spider("Z", 1)
    x = catalog.single_spider("X", 1)
    assert canonical_hash(z) != canonical_hash(x)
    assert canonical_hash(z) != canonical_hash(catalog.single_spider("Z", 0))


def test_boundary_order_matters():
    d = catalog.cnot()
    swapped = d.edit()
    swapped.inputs = list(reversed(d.inputs))
    assert canonical_hash(swapped.freeze()) != canonical_hash(d)


def test_order_covers_all_vertices():
    d = catalog.braided_cnot()
    assert sorted(canonical_order(d)) == sorted(d.vertices())
