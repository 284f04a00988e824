import random
from fractions import Fraction

import pytest

from babygiant.arith import EPS, EpsScalar, scalar_sign, limit_eps
from babygiant.poly import (MultiPoly, ParseError, cauchy_bound, derivative_sequence, parse_poly, poly,
                            pseudo_remainder)


def test_scalar_sign_examples():
    assert scalar_sign(Fraction(3, 4)) == 1
    assert scalar_sign(-2 * EPS + EPS * EPS) == -1
    assert scalar_sign(0) == 0


def test_limit_eps_examples():
    assert limit_eps(3 + EPS) == 3
    assert limit_eps(EPS) == 0
    assert limit_eps(Fraction(5)) == 5


def test_eps_arithmetic_orders():
    a = EpsScalar.lift(1) + EPS
    b = EpsScalar.lift(1) - EPS
    assert scalar_sign(a - b) == 1
    assert scalar_sign(EPS * EPS - EPS) == -1


def test_pseudo_remainder_examples():
    assert pseudo_remainder(poly("t^2 + 1"), poly("t^2 - 2"), "t") == MultiPoly.constant(3)
    assert pseudo_remainder(poly("t^3"), poly("2*t - 1"), "t") == MultiPoly.constant(1)
    assert pseudo_remainder(poly("t + 1"), poly("t^2 - 2"), "t") == poly("t + 1")


def test_derivative_sequence_examples():
    assert derivative_sequence(poly("t^2 - 2"), "t") == [poly("t^2 - 2"), poly("2*t"), poly("2")]
    assert derivative_sequence(MultiPoly.constant(5), "t") == [MultiPoly.constant(5)]
    assert derivative_sequence(poly("t^3 - t"), "t") == [poly("t^3 - t"), poly("3*t^2 - 1"), poly("6*t"),
                                                          poly("6")]


def test_cauchy_bound_examples():
    assert cauchy_bound(poly("2*x^3 + x")) == Fraction(1, 3)
    assert cauchy_bound(poly("x")) == 1
    assert cauchy_bound(poly("x^2 - 4")) == Fraction(4, 5)


def _random_poly(rng, nvars=3):
    terms = {}
    for _ in range(rng.randint(1, 6)):
        mono = tuple(rng.randint(0, 3) for _ in range(nvars))
        terms[mono] = Fraction(rng.randint(-9, 9), rng.choice([1, 1, 2, 3, 7]))
    return MultiPoly.from_dict(terms, tuple("x%d" % (i + 1) for i in range(nvars)))


def test_print_parse_round_trip():
    rng = random.Random(7)
    for _ in range(100):
        p = _random_poly(rng)
        assert parse_poly(str(p)) == p


def test_parse_error_position():
    with pytest.raises(ParseError):
        parse_poly("x1^2 + + ")


def test_multiplication_matches_substitution():
    rng = random.Random(3)
    for _ in range(20):
        a, b = _random_poly(rng), _random_poly(rng)
        pt = {"x1": Fraction(1, 2), "x2": Fraction(-2), "x3": Fraction(3)}
        lhs = (a * b).subs(pt).constant_value()
        assert lhs == a.subs(pt).constant_value() * b.subs(pt).constant_value()
