import pytest

from topozx import catalog
from topozx.canon import isomorphic
from topozx.diagram import X, Z
from topozx.errors import InputError
from topozx.gates import UNRECOGNIZED, build_default_entries, library_entry, load_library, logical_form, recognize
from topozx.semantics import equiv_up_to_scalar


def test_shipped_library_matches_builder():
    shipped = {e.name: e for e in load_library()}
    for e in build_default_entries():
        assert isomorphic(shipped[e.name].diagram, e.diagram)[0]
        assert equiv_up_to_scalar(shipped[e.name].tensor, e.tensor, tol=1e-12).equivalent


def test_recognize_by_isomorphism_and_tensor():
    lib = load_library()
    assert recognize(catalog.cnot(), lib).name == "CNOT"
    # not isomorphic to the stored CZ diagram, but the same map
    r = recognize(catalog.cnot_conjugated_by_hadamards(), lib)
    assert r.name == "CZ"
    assert recognize(catalog.single_spider(Z, 1), lib).name == "Z_L"


def test_unknown_map_is_unrecognized():
    d = catalog.single_spider(Z, "1/2")
    assert recognize(d, load_library()).name == UNRECOGNIZED


def test_unknown_gate_name():
    with pytest.raises(InputError):
        library_entry("TOFFOLI")


def test_logical_form_of_braided_cnot():
    g = logical_form(catalog.braided_cnot(), catalog.BRAIDED_CNOT_GROUPS, catalog.BRAIDED_CNOT_GROUPS)
    assert recognize(g, load_library()).name == "CNOT"


def test_bad_groups_are_rejected():
    with pytest.raises(InputError):
        logical_form(catalog.double_defect(), [[0, 1, 2, 3, 4]], [[0, 1, 2, 3]])
