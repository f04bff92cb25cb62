import xml.etree.ElementTree as ET

import numpy as np
import pytest

from mgl.errors import InvalidInput
from mgl.render import CurveSpec, HeatmapSpec, diverging_color, render_curves, render_heatmap

NS = "{http://www.w3.org/2000/svg}"


def cells(svg):
    return [el for el in ET.fromstring(svg).iter(NS + "rect")]


def test_color_scale_anchors():
    assert diverging_color(0.0) == "#ffffff"
    assert diverging_color(1.0) == "#ff0000"
    assert diverging_color(-1.0) == "#0000ff"
    assert diverging_color(5.0) == diverging_color(1.0)


@pytest.mark.parametrize("v", [0.1, 0.37, 0.5, 0.99])
def test_color_scale_hue_mirrored(v):
    pos, neg = diverging_color(v), diverging_color(-v)
    assert neg == "#" + pos[5:7] + pos[3:5] + pos[1:3]


def test_heatmap_zero_cell():
    rects = cells(render_heatmap(HeatmapSpec(np.zeros((1, 1)))))
    assert len(rects) == 1
    assert rects[0].get("fill") == "#ffffff"


def test_heatmap_diagonal_extremes():
    rects = cells(render_heatmap(HeatmapSpec(np.diag([1.0, -1.0]), cell_size=7)))
    fills = [r.get("fill") for r in rects]
    assert fills == ["#ff0000", "#ffffff", "#ffffff", "#0000ff"]
    assert {r.get("width") for r in rects} == {"7"}


def test_heatmap_clamp():
    m = np.array([[10.0, 0.5], [0.5, -10.0]])
    fills = [r.get("fill") for r in cells(render_heatmap(HeatmapSpec(m, clamp=0.5)))]
    assert fills == ["#ff0000", "#ff0000", "#ff0000", "#0000ff"]


def test_heatmap_deterministic_and_titled():
    m = np.random.default_rng(0).normal(size=(5, 5))
    a = render_heatmap(HeatmapSpec(m, title="a < b"))
    assert a == render_heatmap(HeatmapSpec(m, title="a < b"))
    assert len(cells(a)) == 25
    assert "a &lt; b" in a


def test_heatmap_rejects_nan_and_bad_size():
    with pytest.raises(InvalidInput):
        HeatmapSpec(np.array([[np.nan]]))
    with pytest.raises(InvalidInput):
        HeatmapSpec(np.eye(2), cell_size=0)


def polylines(svg):
    return list(ET.fromstring(svg).iter(NS + "polyline"))


def test_curves_constant_top():
    svg = render_curves(CurveSpec([0, 1, 2], {"mgl": [1.0, 1.0, 1.0]}))
    (line,) = polylines(svg)
    ys = {p.split(",")[1] for p in line.get("points").split()}
    assert ys == {"40"}


def test_curves_two_methods_legend():
    svg = render_curves(CurveSpec([100, 200], {"mgl": [0.5, 0.9], "jgl": [0.4, 0.6]}))
    assert len(polylines(svg)) == 2
    texts = [t.text for t in ET.fromstring(svg).iter(NS + "text")]
    assert "mgl" in texts and "jgl" in texts
    assert svg == render_curves(CurveSpec([100, 200], {"mgl": [0.5, 0.9], "jgl": [0.4, 0.6]}))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(x=[0, 1], series={"a": [0.5, 1.2]}),
        dict(x=[0, 1], series={"a": [0.5]}),
        dict(x=[0], series={"a": [0.5]}),
        dict(x=[0, 1], series={}),
    ],
)
def test_curves_validation(kwargs):
    with pytest.raises(InvalidInput):
        CurveSpec(**kwargs)
