from fractions import Fraction

import pytest

from babygiant.curves import (curve_segments, eval_curve_segment, projection_critical_points, silhouette)
from babygiant.poly import poly
from babygiant.triangular import EMPTY

TORUS = "36*(x1^2+((12*x2+5*x3)/13)^2) - (x1^2+x2^2+x3^2+8)^2"


def test_circle_segments():
    out = curve_segments(EMPTY, poly("x1^2 + x2^2 - 1"))
    assert [v.approx()[-1] for v in out.values] == [-1, 1]
    assert len(out.curves) == 1 and len(out.curves[0]) == 2
    lower, upper = out.curves[0]
    assert eval_curve_segment(upper, 0) == pytest.approx([0, 1])
    assert eval_curve_segment(lower, 0) == pytest.approx([0, -1])
    for seg in (lower, upper):
        assert seg.left_point.approx() == pytest.approx([-1, 0])
        assert seg.right_point.approx() == pytest.approx([1, 0])
        x, y = eval_curve_segment(seg, Fraction(1, 3))
        assert x == pytest.approx(1 / 3) and x * x + y * y == pytest.approx(1)


def test_eval_outside_interval_raises():
    out = curve_segments(EMPTY, poly("x1^2 + x2^2 - 1"))
    with pytest.raises(ValueError):
        eval_curve_segment(out.curves[0][0], -1)


def test_empty_curve():
    out = curve_segments(EMPTY, poly("x1^2 + x2^2 + 1"))
    assert out.values == [] and out.all_curves() == []


def test_torus_distinguished_values():
    out = curve_segments(EMPTY, poly(TORUS))
    vals = [v.approx()[-1] for v in out.values]
    for c in (-4, -2, 2, 4):
        assert any(abs(v - c) < 1e-9 for v in vals)


def test_torus_silhouette_and_critical_points():
    s = silhouette([poly(TORUS)], ["x1", "x2", "x3"])
    assert len(s["critical_values"]) == 6
    pts = projection_critical_points([poly(TORUS)], ["x1", "x2", "x3"])
    assert sorted(round(p.approx()[0]) for p in pts) == [-4, -2, 2, 4]
