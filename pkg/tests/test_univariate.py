import random
from fractions import Fraction

from babygiant.poly import poly
from babygiant.univariate import (compare_thom, sign_determination, signed_subresultants,
                                  thom_encodings_of_roots, _to_poly)

import oracles


def test_subresultant_last_constant():
    out = signed_subresultants(poly("t^2 - 2"), poly("2*t"), "t")
    # sign convention: sRes_0 = (-1)^(p(p-1)/2) * Sylvester determinant
    assert oracles.sylvester_resultant([-2, 0, 1], [0, 2]) == -8
    assert out.coeffs[0] == 8


def test_subresultant_gcd_examples():
    assert signed_subresultants(poly("t^2 - 2"), poly("t^2 - 2"), "t").gcd() == poly("t^2 - 2")
    g = signed_subresultants(poly("(t-1)*(t-2)"), poly("(t-1)*(t-3)"), "t").gcd()
    assert g.degree("t") == 1 and g.subs({"t": 1}).is_zero()


def test_sign_determination_examples():
    assert sign_determination(poly("t^2 - 2"), [poly("t")]) == [(0, (-1,)), (1, (1,))]
    assert sign_determination(poly("t^2 + 1"), [poly("t")]) == []
    assert sign_determination(poly("t"), [poly("t^2 + 1")]) == [(0, (1,))]


def test_thom_encoding_examples():
    assert [e.signs for e in thom_encodings_of_roots(poly("t^2 - 2"))] == [(-1, 1), (1, 1)]
    assert [e.signs for e in thom_encodings_of_roots(poly("(t - 1)^3"))] == [(0, 0, 1)]
    assert [e.signs for e in thom_encodings_of_roots(poly("t^3 - t"))] == [(1, -1, 1), (-1, 0, 1), (1, 1, 1)]


def test_compare_thom_examples():
    a = thom_encodings_of_roots(poly("t^2 - 2"))
    b = thom_encodings_of_roots(poly("t^4 - 4"))
    c = thom_encodings_of_roots(poly("2*t - 3"))
    assert compare_thom(a[1], a[0]) == ">"
    assert compare_thom(a[1], b[1]) == "="
    assert compare_thom(a[1], c[0]) == "<"


# randomized comparison against the interval oracle ------------------------------------

def random_dense(rng, deg):
    """Products of small factors so that repeated and shared roots occur."""
    coeffs = [1]
    while len(coeffs) - 1 < deg:
        d = rng.randint(1, min(2, deg - len(coeffs) + 1))
        f = [rng.randint(-3, 3) for _ in range(d)] + [rng.choice([1, -1, 2])]
        acc = [0] * (len(coeffs) + len(f) - 1)
        for i, a in enumerate(coeffs):
            for j, b in enumerate(f):
                acc[i + j] += a * b
        coeffs = acc
    return coeffs


def kernel_cases(n=200, seed=11):
    rng = random.Random(seed)
    cases = []
    for _ in range(n):
        f = random_dense(rng, rng.randint(1, 8))
        qs = [random_dense(rng, rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
        if rng.random() < 0.3:
            qs.append(f[:])
        cases.append((f, qs))
    return cases


def check_kernel_case(f, qs):
    F = _to_poly(f, "t")
    Q = [_to_poly(q, "t") for q in qs]
    got = [s for _, s in sign_determination(F, Q, "t")]
    if got != oracles.signs_at_roots(f, qs):
        return False
    ders = oracles.derivatives(f)
    enc = [e.signs for e in thom_encodings_of_roots(F, "t")]
    return enc == oracles.signs_at_roots(f, ders)


def subresultant_cases(n=100, seed=5):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        p = rng.randint(1, 7)
        q = rng.randint(0, p - 1)
        P = [rng.randint(-6, 6) for _ in range(p)] + [rng.choice([1, -1, 2, 3])]
        Q = [rng.randint(-6, 6) for _ in range(q)] + [rng.choice([1, -2, 3])]
        out.append((P, Q))
    return out


def check_subresultant_case(P, Q):
    p = len(P) - 1
    out = signed_subresultants(_to_poly(P, "t"), _to_poly(Q, "t"), "t")
    eps = -1 if (p * (p - 1) // 2) % 2 else 1
    return Fraction(out.coeffs.get(0, 0)) == eps * oracles.sylvester_resultant(P, Q)


def test_kernel_against_interval_oracle():
    bad = [c for c in kernel_cases() if not check_kernel_case(*c)]
    assert bad == []


def test_subresultant_against_sylvester():
    bad = [c for c in subresultant_cases() if not check_subresultant_case(*c)]
    assert bad == []
