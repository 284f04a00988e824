"""
Conversions between MultiPoly and python-flint multivariate polynomials.

Flint does the heavy multivariate work: resultants, gcds and factorization
over Q.  Polynomials with eps coefficients are handled by treating eps as
an ordinary variable named ``eps`` and converting back afterwards.
"""

from fractions import Fraction
from functools import lru_cache

import flint

from .poly import MultiPoly, ZERO, sort_vars

__all__ = ["to_flint", "from_flint", "resultant", "gcd", "factor", "squarefree",
           "irreducible_factors", "content_free", "discriminant"]


@lru_cache(maxsize=None)
def _ctx(names):
    return flint.fmpq_mpoly_ctx.get(names, "lex")


def _names(*polys, extra=()):
    vs = set(extra)
    for p in polys:
        p = MultiPoly.coerce(p)
        vs.update(p.vars)
        if p.has_eps():
            vs.add("eps")
    return tuple(sort_vars(tuple(vs))) or ("_c",)


def to_flint(p, names):
    p = MultiPoly.coerce(p)
    if p.has_eps():
        p = p.eps_to_var("eps")
    ctx = _ctx(names)
    pos = [names.index(v) for v in p.vars]
    n = len(names)
    data = {}
    for m, c in p.terms.items():
        e = [0] * n
        for i, k in zip(pos, m):
            e[i] = k
        c = Fraction(c)
        data[tuple(e)] = flint.fmpq(c.numerator, c.denominator)
    return ctx.from_dict(data) if data else ctx.from_dict({})


def from_flint(f, names):
    terms = {}
    for m, c in f.to_dict().items():
        c = flint.fmpq(c)
        num, den = int(c.p), int(c.q)
        terms[tuple(int(x) for x in m)] = Fraction(num, den) if den != 1 else num
    p = MultiPoly.from_dict(terms, names) if terms else ZERO
    if "eps" in p.vars:
        p = p.var_to_eps("eps")
    return p


def resultant(a, b, var):
    """Resultant with respect to ``var`` (flint's convention)."""
    names = _names(a, b, extra=(var,))
    r = to_flint(a, names).resultant(to_flint(b, names), var)
    return from_flint(r, names)


def discriminant(a, var):
    names = _names(a, extra=(var,))
    return from_flint(to_flint(a, names).discriminant(var), names)


def gcd(a, b):
    a, b = MultiPoly.coerce(a), MultiPoly.coerce(b)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    names = _names(a, b)
    g = from_flint(to_flint(a, names).gcd(to_flint(b, names)), names)
    return g


def factor(a):
    """``(constant, [(factor, multiplicity), ...])`` with primitive integer factors."""
    a = MultiPoly.coerce(a)
    names = _names(a)
    c, fs = to_flint(a, names).factor()
    out = []
    for f, e in fs:
        p = from_flint(f, names).primitive()
        out.append((p, int(e)))
    return c, out


def irreducible_factors(a):
    """Distinct non-constant irreducible factors, normalised with positive leading term."""
    out = []
    for f, _ in factor(a)[1]:
        if f.is_constant():
            continue
        if f.monic_sign() < 0:
            f = -f
        out.append(f)
    return sorted(out, key=lambda f: (f.total_degree(), str(f)))


def squarefree(a):
    """Product of the distinct irreducible factors (primitive, positive leading term)."""
    a = MultiPoly.coerce(a)
    if a.is_zero() or a.is_constant():
        return a
    names = _names(a)
    c, fs = to_flint(a, names).factor_squarefree()
    acc = None
    for f, _ in fs:
        p = from_flint(f, names)
        acc = p if acc is None else acc * p
    if acc is None:
        return MultiPoly.constant(1)
    acc = acc.primitive()
    return -acc if acc.monic_sign() < 0 else acc


def content_free(a, var):
    """Remove factors of ``a`` that do not involve ``var``."""
    a = MultiPoly.coerce(a)
    keep = None
    for f, e in factor(a)[1]:
        if var in f.vars:
            keep = f ** e if keep is None else keep * f ** e
    return keep if keep is not None else MultiPoly.constant(1)


def prem(a, b, var):
    """Pseudo remainder of ``a`` by ``b`` in ``var``, up to a nonzero rational factor.

    The result equals ``lc(b)^e * a`` modulo ``b`` for some ``e``, scaled.
    """
    a, b = MultiPoly.coerce(a), MultiPoly.coerce(b)
    names = _names(a, b)
    names = tuple(n for n in names if n != var) or ("_c",)
    A = [to_flint(c, names) for c in a.coeffs_in(var)]
    B = [to_flint(c, names) for c in b.coeffs_in(var)]
    db = len(B) - 1
    lc = B[-1]
    if lc.is_constant():
        inv = 1 / lc.leading_coefficient()
        B = [c * inv for c in B]
        while len(A) - 1 >= db and A:
            top = A[-1]
            shift = len(A) - 1 - db
            for k, c in enumerate(B):
                A[k + shift] = A[k + shift] - top * c
            while A and A[-1].is_zero():
                A.pop()
    while len(A) - 1 >= db and A:
        top = A[-1]
        shift = len(A) - 1 - db
        A = [c * lc for c in A]
        for k, c in enumerate(B):
            A[k + shift] = A[k + shift] - top * c
        while A and A[-1].is_zero():
            A.pop()
        if A:
            r = 1 / A[-1].leading_coefficient()
            A = [c * r for c in A]
    terms = MultiPoly.constant(0)
    for k, c in enumerate(A):
        if not c.is_zero():
            terms = terms + from_flint(c, names) * MultiPoly.var(var) ** k
    return terms


def subresultants(P, Q):
    """Signed subresultant polynomials and coefficients of dense lists ``P``, ``Q``.

    Coefficients are computed with flint and returned as MultiPoly.
    """
    from .univariate import _subres_dense
    names = _names(*P, *Q)
    fp = [to_flint(c, names) for c in P]
    fq = [to_flint(c, names) for c in Q]
    S, s, _, _ = _subres_dense(fp, fq, with_cofactors=False)
    back = lambda c: from_flint(c, names) if isinstance(c, flint.fmpq_mpoly) else MultiPoly.coerce(c)
    return ({j: [back(c) for c in v] for j, v in S.items()}, {j: back(c) for j, c in s.items()})


def pseudo_quotient(P, Q):
    """Pseudo quotient of dense lists ``P`` by ``Q`` computed with flint."""
    from .univariate import d_prem
    names = _names(*P, *Q)
    C, _ = d_prem([to_flint(c, names) for c in P], [to_flint(c, names) for c in Q])
    return [from_flint(c, names) if isinstance(c, flint.fmpq_mpoly) else MultiPoly.coerce(c)
            for c in C]
