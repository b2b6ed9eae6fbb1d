from topozx import catalog
from topozx.plotting import draw_diagram, measure_curve, plot_measure_curve
from topozx.rewrite import normalize


def test_draw_diagram_writes_png(tmp_path):
    p = draw_diagram(catalog.braided_cnot(), tmp_path / "d.png", title="braid")
    assert p.read_bytes()[:4] == b"\x89PNG"


def test_measure_curve_ends_at_normal_form(tmp_path):
    d = catalog.braided_cnot()
    nf, trace = normalize(d)
    curve = measure_curve(trace, d)
    assert len(curve) == len(trace) + 1
    assert curve[-1] == nf.measure()
    assert plot_measure_curve(trace, d, tmp_path / "c.png").stat().st_size > 0
