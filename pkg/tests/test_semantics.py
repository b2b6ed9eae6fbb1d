import numpy as np
import pytest

from topozx import catalog
from topozx.diagram import X, Z, VertexKind
from topozx.errors import ResourceError
from topozx.phase import PI, Phase
from topozx.semantics import CNOT, TensorMap, equiv_up_to_scalar, evaluate, generator_tensor


def test_hadamard_wire():
    d = catalog.double_hadamard()
    assert equiv_up_to_scalar(evaluate(d), evaluate(catalog.wire())).equivalent


def test_scalar_is_reported():
    a = TensorMap(1, 1, np.eye(2, dtype=complex))
    b = TensorMap(1, 1, 2j * np.eye(2, dtype=complex))
    eq = equiv_up_to_scalar(a, b)
    assert eq.equivalent
    assert np.isclose(eq.scalar * 2j, 1) or np.isclose(eq.scalar, 2j)


def test_zero_map_is_not_equivalent_to_nonzero():
    a = TensorMap(1, 1, np.zeros((2, 2), dtype=complex))
    b = TensorMap(1, 1, np.eye(2, dtype=complex))
    assert not equiv_up_to_scalar(a, b).equivalent


def test_phase_spider_diagonal():
    t = generator_tensor(VertexKind(Z, Phase.from_ratio(1, 2)), 1, 1).matrix
    assert np.allclose(t, np.diag([1, 1j]))


def test_contraction_order_does_not_matter():
    d = catalog.cnot_conjugated_by_hadamards()
    a = evaluate(d, order_seed=1)
    for seed in range(2, 6):
        assert equiv_up_to_scalar(a, evaluate(d, order_seed=seed), tol=1e-10).equivalent


def test_rank_cap_raises():
    with pytest.raises(ResourceError):
        evaluate(catalog.double_defect(), rank_cap=16)


def test_json_round_trip():
    t = TensorMap(2, 2, np.asarray(CNOT, dtype=complex))
    assert np.allclose(TensorMap.from_json(t.to_json()).matrix, t.matrix)
