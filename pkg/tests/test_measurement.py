import numpy as np
import pytest

from topozx.canon import canonical_hash
from topozx.errors import InputError, SpecError
from topozx.lattice import build_unit_cell, cell_face_sites
from topozx.measurement import (
    Defect,
    DefectSpec,
    LogicalOperatorSpec,
    MeasurementPattern,
    Pattern,
    parity_check,
    pattern_from_json,
    run_pattern,
)
from topozx.rewrite import normalize
from topozx.semantics import equiv_up_to_scalar, evaluate

PATH = [(1, 1, 0), (1, 1, 2), (1, 1, 4)]
RING = LogicalOperatorSpec("ring", [(0, 1, 2), (2, 1, 2), (1, 0, 2), (1, 2, 2)])
CHAIN_LOW = LogicalOperatorSpec("chain", [(1, 0, 1)])
CHAIN_HIGH = LogicalOperatorSpec("chain", [(1, 0, 3)])


def _run(ops=(), outcomes="all-plus", normalise=True):
    p = Pattern((1, 1, 2), "red-centre", DefectSpec([Defect("primal", PATH)]), list(ops), outcomes)
    return run_pattern(p, normalise=normalise)


def test_parity_check_flags_odd_cells():
    cell = build_unit_cell()
    faces = cell_face_sites((0, 0, 0))
    outcomes = {f: 1 for f in faces}
    basis = {f: "X" for f in faces}
    assert parity_check(cell, MeasurementPattern(basis, outcomes)) == []
    outcomes[faces[0]] = -1
    (bad,) = parity_check(cell, MeasurementPattern(basis, outcomes))
    assert bad["cell"] == [0, 0, 0]


def test_defect_carving_leaves_eight_legs():
    cp = _run()
    assert len(cp.inputs[0]) == 4 and len(cp.outputs[0]) == 4
    assert len(cp.normal.spiders()) == 1


def _phase_free(d):
    b = d.edit()
    for v in d.spiders():
        b.set_phase(v, 0)
    return normalize(b.freeze())[0]


def test_outcomes_only_leave_pauli_byproducts():
    ref = canonical_hash(_run().normal)
    for seed in range(3):
        cp = _run(outcomes={"seed": seed})
        assert cp.parity == []
        assert all(cp.normal.phase(v).is_pauli() for v in cp.normal.spiders())
        assert canonical_hash(_phase_free(cp.normal)) == ref


def test_ring_and_chain_anticommute():
    a = evaluate(_run([RING, CHAIN_LOW], normalise=False).measured).matrix
    b = evaluate(_run([CHAIN_HIGH, RING], normalise=False).measured).matrix
    ratio = np.vdot(a, b) / np.vdot(a, a)
    assert np.isclose(ratio, -1)


def test_operators_change_the_map():
    plain = evaluate(_run(normalise=False).measured)
    ring = evaluate(_run([RING], normalise=False).measured)
    assert not equiv_up_to_scalar(plain, ring).equivalent


def test_operator_on_defect_is_rejected():
    with pytest.raises(SpecError):
        _run([LogicalOperatorSpec("ring", [PATH[1]])])


def test_pattern_json_errors():
    with pytest.raises(InputError):
        pattern_from_json({"lattice": {"cells": [1, 1]}})
