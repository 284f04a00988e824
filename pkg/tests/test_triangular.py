
import pytest

from babygiant.poly import MultiPoly, poly
from babygiant.triangular import (EMPTY, BlockRepresentation, NotInvertible, TriangularThomEncoding,
                                  bounded_algebraic_sampling, pseudo_invert, pseudo_reduce,
                                  restricted_elimination, substitute_block, triangular_sample_points,
                                  triangular_sign_determination, triangular_thom_encodings)

SQRT2 = TriangularThomEncoding([poly("t1^2 - 2")], [(1, 1)])


def test_pseudo_reduce_examples():
    assert pseudo_reduce(poly("t1^2"), SQRT2) == MultiPoly.constant(2)
    r = pseudo_reduce(poly("t1^3"), SQRT2)
    assert r == poly("2*t1")
    assert SQRT2.sign(r) == 1
    assert pseudo_reduce(MultiPoly.constant(5), SQRT2) == MultiPoly.constant(5)


def test_pseudo_invert_reduces_to_a_factor():
    enc = TriangularThomEncoding([poly("t1^4 - t1^2 - 2")], [(1, 1, 1, 1)])
    g, c, enc2 = pseudo_invert(poly("t1^2 + 1"), enc)
    assert enc2.levels[0] == poly("t1^2 - 2")
    assert tuple(enc2.signs[0]) == (1, 1)
    assert g == MultiPoly.constant(1) and c == 3


def test_pseudo_invert_extended_euclid():
    g, c, _ = pseudo_invert(poly("t1"), SQRT2)
    assert g == poly("t1") and c == 2


def test_pseudo_invert_zero_raises():
    with pytest.raises(NotInvertible):
        pseudo_invert(poly("t1^2 - 2"), SQRT2)


def test_signs_over_towers():
    assert triangular_sign_determination(SQRT2, [poly("t1^3 - t1")]) == [1]
    assert EMPTY.sign(MultiPoly.constant(-7)) == -1
    t2 = SQRT2.extend("t2", poly("t2^2 - t1"), (1, 1))
    assert t2.sign(poly("t2^4 - 2")) == 0


def test_roots_over_towers():
    assert len(triangular_thom_encodings(EMPTY, poly("u^2 - 2"))) == 2
    roots = SQRT2.roots(poly("u^2 - t1"), "u")
    vals = sorted(r.approx()[-1] for r in roots)
    assert vals == pytest.approx([-2 ** 0.25, 2 ** 0.25])
    assert SQRT2.roots(poly("u^2 + t1"), "u") == []


def test_sample_points():
    roots, samples = triangular_sample_points(EMPTY, [poly("x^2 - 1")])
    assert [r.approx()[-1] for r in roots] == [-1, 1] and len(samples) == 3
    assert samples[0] < -1 < samples[1] < 1 < samples[2]
    roots, samples = triangular_sample_points(EMPTY, [poly("x")])
    assert samples[0] < 0 < samples[1]
    roots, samples = triangular_sample_points(EMPTY, [poly("x^2 - 2"), poly("x")])
    vals = [r.approx()[-1] for r in roots]
    assert len(roots) == 3 and len(samples) == 4
    assert samples[0] < vals[0] < samples[1] < vals[1] < samples[2] < vals[2] < samples[3]


def test_restricted_elimination():
    fam = restricted_elimination(poly("v^2 - x"), [], "v")
    assert any(p.primitive() in (poly("x"), poly("-x")) for p in fam)
    fam = restricted_elimination(poly("x*v + 1"), [], "v")
    assert any(p.primitive() in (poly("x"), poly("-x")) for p in fam)


def test_bounded_algebraic_sampling_circle():
    reps = bounded_algebraic_sampling(poly("x1^2 + x2^2 - 1"))
    assert reps
    for r in reps:
        x, y = r.approx()
        assert abs(x * x + y * y - 1) <= 1e-9
    assert bounded_algebraic_sampling(poly("x1^2 + x2^2 + 1")) == []


def test_bounded_algebraic_sampling_two_lines():
    reps = bounded_algebraic_sampling(poly("(x1^2 - 1)^2"), variables=["x1"])
    assert sorted(round(r.approx()[0]) for r in reps) == [-1, 1]


def test_substitute_block():
    enc = TriangularThomEncoding([poly("t1^2 - 2")], [(1, 1)])
    blk = BlockRepresentation.identity(enc)
    assert substitute_block(poly("x1^2 + x2"), blk) == poly("t1^2 + x2")
    blk2 = BlockRepresentation(enc, (1,), ((poly("2"), poly("t1")),))
    assert substitute_block(poly("x1"), blk2) == poly("2*t1")
