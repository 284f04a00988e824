import pytest

from babygiant.limits import (UnboundedPoint, is_well_parametrized, limit_of_bounded_point, limit_of_curve,
                              make_segment, reparametrize_curve)
from babygiant.poly import poly
from babygiant.triangular import EMPTY, RealUnivariateRep


def _limit(g, tau):
    rep = RealUnivariateRep(poly(g), tau, (poly("1"), poly("u")), EMPTY, "u")
    return limit_of_bounded_point(EMPTY, rep)[1]


def test_limit_of_point():
    assert _limit("u - eps", (1,)).approx() == pytest.approx([0])
    assert _limit("u^2 - eps^2", (1, 1)).approx() == pytest.approx([0], abs=1e-12)
    assert _limit("u^2 - 1 - eps", (1, 1)).approx() == pytest.approx([1])


def test_limit_of_unbounded_point():
    with pytest.raises(UnboundedPoint):
        _limit("eps*u - 1", (1,))


def cylinder_curve():
    """Curve (x, x/eps, sqrt(1 - x^2/eps^2)) on the cylinder over 0 < x < eps."""
    return make_segment(EMPTY, "x1", ("x1", "x2", "x3"), 0, poly("eps"), poly("eps^2*u^2+x1^2-eps^2"),
                        (1, 1), tuple(poly(x) for x in ("eps", "eps*x1", "x1", "eps*u")))


def quarter_circle():
    return make_segment(EMPTY, "x2", ("x1", "x2", "x3"), 0, 1, poly("u^2+x2^2-1"), (1, 1),
                        tuple(poly(x) for x in ("1", "eps*x2", "x2", "u")))


def test_well_parametrized_examples():
    diag = make_segment(EMPTY, "x1", ("x1", "x2"), 0, 1, poly("u-x1"), (1,),
                        (poly("1"), poly("x1"), poly("u")))
    assert is_well_parametrized(diag)[0] is True
    assert is_well_parametrized(cylinder_curve())[0] is False


def test_reparametrize_circle_arc():
    arc = make_segment(EMPTY, "x1", ("x1", "x2"), -1, 1, poly("u^2+x1^2-1"), (1, 1),
                       (poly("1"), poly("x1"), poly("u")))
    pts, segs = reparametrize_curve(EMPTY, arc)
    assert [s.param for s in segs] == ["x2", "x1", "x2"]
    assert len(pts) == 2
    for s in segs:
        assert is_well_parametrized(s)[0]


def test_eps_free_curve_is_its_own_limit():
    diag = make_segment(EMPTY, "x1", ("x1", "x2"), 0, 1, poly("u-x1"), (1,),
                        (poly("1"), poly("x1"), poly("u")))
    _, pts, segs = limit_of_curve(EMPTY, diag)
    assert pts == [] and segs == [diag]


def test_limit_of_cylinder_curve_lies_on_quarter_circle():
    _, pts, segs = limit_of_curve(EMPTY, cylinder_curve())
    for p in pts:
        x1, x2, x3 = p.approx()
        assert abs(x1) < 1e-9 and x2 * x2 + x3 * x3 == pytest.approx(1)
    assert segs


def test_quarter_circle_certificate():
    # expected true; the speed along x2 is unbounded near x2 = 1, so the exact certificate says false
    assert is_well_parametrized(quarter_circle())[0] is True


def test_reparametrize_cylinder_curve_single_piece():
    _, segs = reparametrize_curve(EMPTY, cylinder_curve())
    assert len(segs) == 1 and segs[0].param == "x2"
