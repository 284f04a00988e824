"""
Univariate exact kernel: signed subresultants, Tarski queries, sign
determination and Thom encodings.

Polynomials are handled as dense coefficient lists (lowest degree first).
Coefficients may be rationals, eps-polynomials or multivariate polynomials
in other variables; in the last case the caller supplies a ``sign``
function that decides the sign of such a coefficient (for instance at a
point of a triangular tower).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

import flint

from .arith import EpsScalar, norm_scalar, scalar_sign
from .poly import MultiPoly

__all__ = [
    "ThomEncoding", "SubresultantOutput", "signed_subresultants",
    "subresultant_coefficients", "tarski_query", "sign_determination",
    "sign_conditions", "thom_encodings_of_roots", "compare_thom",
    "thom_compare_same", "default_sign", "as_dense", "pmv",
]


# dense helpers ---------------------------------------------------------------

def _iszero(c):
    return c == 0


def _trim(a):
    a = list(a)
    while a and _iszero(a[-1]):
        a.pop()
    return a


_FL = (flint.fmpq_mpoly,)


def _mul(a, b):
    if isinstance(a, _FL) or isinstance(b, _FL):
        return a * b
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        return MultiPoly.coerce(a) * b
    return norm_scalar(a * b)


def _add(a, b):
    if isinstance(a, _FL) or isinstance(b, _FL):
        return a + b
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        return MultiPoly.coerce(a) + b
    return norm_scalar(a + b)


def _sub(a, b):
    if isinstance(a, _FL) or isinstance(b, _FL):
        return a - b
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        return MultiPoly.coerce(a) - b
    return norm_scalar(a - b)


def _div(a, b):
    """Exact division in the coefficient ring."""
    if isinstance(a, _FL) or isinstance(b, _FL):
        return a / b
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        return MultiPoly.coerce(a).exact_div(MultiPoly.coerce(b))
    if isinstance(a, EpsScalar) or isinstance(b, EpsScalar):
        return norm_scalar(EpsScalar.lift(a) / b)
    return norm_scalar(Fraction(a) / b)


def _pow(a, n):
    if isinstance(a, _FL):
        return a ** n
    r = 1
    for _ in range(n):
        r = _mul(r, a)
    return r


def d_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _iszero(x):
            continue
        for j, y in enumerate(b):
            if not _iszero(y):
                out[i + j] = _add(out[i + j], _mul(x, y))
    return _trim(out)


def d_scale(a, c):
    return _trim([_mul(x, c) for x in a])


def d_sub(a, b):
    n = max(len(a), len(b))
    return _trim([_sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
                  for i in range(n)])


def d_deriv(a):
    return _trim([_mul(a[i], i) for i in range(1, len(a))])


def d_prem(A, B, even=False):
    """Pseudo quotient and remainder of dense lists; see :func:`poly.pseudo_divmod`."""
    p, q = len(A) - 1, len(B) - 1
    if q < 0:
        raise ZeroDivisionError("division by zero polynomial")
    e = max(p - q + 1, 0)
    if even and e % 2:
        e += 1
    lc = B[-1]
    R = list(A)
    C = [0] * max(p - q + 1, 0)
    steps = 0
    while len(R) - 1 >= q and R:
        d = len(R) - 1 - q
        top = R[-1]
        C = [_mul(c, lc) for c in C]
        C[d] = _add(C[d], top)
        R = [_mul(r, lc) for r in R]
        for i, b in enumerate(B):
            R[i + d] = _sub(R[i + d], _mul(top, b))
        R = _trim(R)
        steps += 1
    if e > steps:
        f = _pow(lc, e - steps)
        R = [_mul(r, f) for r in R]
        C = [_mul(c, f) for c in C]
    return _trim(C), _trim(R)


def as_dense(P, var=None):
    """Dense coefficient list of ``P`` in ``var``; scalars for univariate input."""
    if isinstance(P, list):
        return _trim(P)
    P = MultiPoly.coerce(P)
    if var is None:
        if len(P.vars) > 1:
            raise ValueError("variable needed for a multivariate polynomial")
        var = P.vars[0] if P.vars else "t"
    cs = P.coeffs_in(var)
    return _trim([c.constant_value() if c.is_constant() else c for c in cs])


def _to_poly(a, var):
    return MultiPoly.from_coeffs([MultiPoly.coerce(c) for c in a], var)


def default_sign(c):
    if isinstance(c, MultiPoly):
        return scalar_sign(c.constant_value())
    return scalar_sign(c)


def _eps(n):
    return -1 if (n * (n - 1) // 2) % 2 else 1


# signed subresultants --------------------------------------------------------

@dataclass
class SubresultantOutput:
    """Signed subresultant sequence of ``(P, Q)`` with cofactors.

    ``polys[j]`` is sResP_j, ``coeffs[j]`` is sRes_j and ``cofactors[j]`` is
    ``(U_j, V_j)`` with ``U_j*P + V_j*Q = sResP_j``.  Index ``p`` holds ``P``.
    """
    var: str
    p: int
    polys: dict
    coeffs: dict
    cofactors: dict

    def last_nonzero(self):
        j = min(k for k, v in self.polys.items() if not v.is_zero())
        return j, self.polys[j]

    def gcd(self):
        return self.last_nonzero()[1]


def _subres_dense(P, Q, with_cofactors=True):
    """Core recurrence, requires ``deg P > deg Q``; ``Q`` may be zero."""
    p = len(P) - 1
    S = {p: P, p - 1: Q}
    s = {p: 1}
    t = {p: 1}
    U = {p: [1], p - 1: []}
    V = {p: [], p - 1: [1]}
    for l in range(p - 1):
        s[l] = 0
    if not Q:
        s[p - 1] = 0
        for l in range(p - 1):
            S[l] = []
            U[l], V[l] = [], []
        return S, s, U, V
    t[p - 1] = Q[-1]
    i, j = p + 1, p
    while S[j - 1]:
        B = S[j - 1]
        k = len(B) - 1
        A = S[i - 1]
        lcB = B[-1]
        if k == j - 1:
            s[j - 1] = t[j - 1]
        else:
            s[j - 1] = 0
            for l in range(k + 1, j - 1):
                S[l] = []
                s[l] = 0
                U[l], V[l] = [], []
            sk = _div(_mul(_eps(j - k), _pow(lcB, j - k)), _pow(s[j], j - k - 1))
            s[k] = sk
            S[k] = [_div(_mul(sk, b), lcB) for b in B]
            if with_cofactors:
                U[k] = [_div(_mul(sk, u), lcB) for u in U[j - 1]]
                V[k] = [_div(_mul(sk, v), lcB) for v in V[j - 1]]
        if k == 0:
            break
        C, R = d_prem(A, B)
        e = (len(A) - 1) - k + 1
        denom = _mul(_pow(s[j], j - k), t[i - 1])
        factor = -_eps(j - k)
        S[k - 1] = [_div(_mul(factor, r), denom) for r in R]
        if with_cofactors:
            le = _pow(lcB, e)
            U[k - 1] = [_div(_mul(factor, x), denom)
                        for x in d_sub(d_scale(U[i - 1], le), d_mul(C, U[j - 1]))]
            V[k - 1] = [_div(_mul(factor, x), denom)
                        for x in d_sub(d_scale(V[i - 1], le), d_mul(C, V[j - 1]))]
        if S[k - 1]:
            t[k - 1] = S[k - 1][-1]
            s[k - 1] = t[k - 1] if len(S[k - 1]) - 1 == k - 1 else 0
        else:
            for l in range(k - 1):
                S[l] = []
                s[l] = 0
                U[l], V[l] = [], []
            s[k - 1] = 0
        i, j = j, k
    for l in range(p):
        S.setdefault(l, [])
        U.setdefault(l, [])
        V.setdefault(l, [])
    return S, s, U, V


def signed_subresultants(P, Q, var=None):
    """Signed subresultant polynomials and coefficients of ``P`` and ``Q``.

    When ``deg P = deg Q`` the sequence is computed for ``P`` and
    ``lc(P)*Q - lc(Q)*P`` (whose degree is smaller) and the cofactors are
    adjusted so the Bezout relation still refers to the original ``Q``.

    Examples
    ========

    >>> from babygiant.poly import poly
    >>> from babygiant.univariate import signed_subresultants
    >>> out = signed_subresultants(poly("t^2 - 2"), poly("2*t"), "t")
    >>> out.coeffs[0]
    8
    """
    if var is None:
        names = set(MultiPoly.coerce(P).vars) | set(MultiPoly.coerce(Q).vars)
        if len(names) > 1:
            raise ValueError("variable needed")
        var = names.pop() if names else "t"
    Pd, Qd = as_dense(P, var), as_dense(Q, var)
    if not Pd and not Qd:
        raise ValueError("both inputs are zero")
    if len(Pd) < len(Qd):
        raise ValueError("signed_subresultants needs deg P >= deg Q")
    p = len(Pd) - 1
    shift = None
    if p == len(Qd) - 1:
        if p == 0:
            raise ValueError("both inputs are constant")
        a, b = Pd[-1], Qd[-1]
        Qd = d_sub(d_scale(Qd, a), d_scale(Pd, b))
        shift = (b, a)
    S, s, U, V = _subres_dense(Pd, Qd)
    if shift is not None:
        b, a = shift
        for j in range(p):
            u, v = U[j], V[j]
            # u*P + v*(a*Q - b*P) = (u - b*v)*P + a*v*Q
            U[j] = d_sub(u, d_scale(v, b))
            V[j] = d_scale(v, a)
    polys = {j: _to_poly(S[j], var) for j in S}
    cof = {j: (_to_poly(U[j], var), _to_poly(V[j], var)) for j in S}
    coeffs = {j: norm_scalar(s[j]) if not isinstance(s[j], MultiPoly) else s[j] for j in s}
    return SubresultantOutput(var, p, polys, coeffs, cof)


def subresultant_coefficients(Pd, Qd):
    """``[sRes_{p-1}, ..., sRes_0]`` of dense ``Pd``, ``Qd`` with ``deg Q < deg P``."""
    p = len(Pd) - 1
    _, s, _, _ = _subres_dense(Pd, Qd, with_cofactors=False)
    return [s[j] for j in range(p - 1, -1, -1)]


# Tarski queries --------------------------------------------------------------

def pmv(signs):
    """Permanences minus variations of a sign list whose first entry is nonzero."""
    total = 0
    prev_i, prev = None, None
    for i, sg in enumerate(signs):
        if sg == 0:
            continue
        if prev is not None:
            gap = i - prev_i
            if gap % 2 == 1:
                total += _eps(gap) * prev * sg
        prev_i, prev = i, sg
    return total


def tarski_query(Q, P, sign=default_sign):
    """``sum of sign Q(x)`` over the real roots ``x`` of ``P`` (dense lists)."""
    P = _trim(P)
    if len(P) <= 1:
        raise ValueError("Tarski query needs a nonconstant polynomial")
    Q = _trim(Q)
    if not Q:
        return 0
    R = d_mul(d_deriv(P), Q)
    if len(R) >= len(P):
        R = d_prem(R, P, even=True)[1]
    if not R:
        return 0
    seq = [sign(P[-1])] + [sign(c) for c in subresultant_coefficients(P, R)]
    return pmv(seq)


# sign determination -------------------------------------------------------------

def _solve_exact(M, b):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(bb)] for row, bb in zip(M, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / pv
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def _rank_select(rows, ncols):
    """Greedy choice of linearly independent rows (indices)."""
    basis = []
    chosen = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for piv, b in basis:
            if v[piv] != 0:
                f = v[piv] / b[piv]
                v = [x - f * y for x, y in zip(v, b)]
        piv = next((c for c in range(ncols) if v[c] != 0), None)
        if piv is not None:
            basis.append((piv, v))
            chosen.append(idx)
            if len(chosen) == ncols:
                break
    return chosen


_SIGN_COLS = (0, 1, -1)


def _entry(alpha, sigma):
    v = 1
    for a, s in zip(alpha, sigma):
        if a:
            v *= s ** a
    return v


def sign_conditions(f, polys, sign=default_sign):
    """Realizable sign conditions of ``polys`` on the real roots of ``f``, with counts.

    Incremental Ben-Or/Kozen/Reif scheme: Tarski queries of products are
    combined through the tensor powers of the 3x3 sign matrix.
    Inputs are dense coefficient lists.
    """
    f = _trim(f)
    if len(f) <= 1:
        if not f:
            raise ValueError("zero polynomial")
        return []
    polys = [d_prem(_trim(q), f, even=True)[1] if len(_trim(q)) >= len(f) else _trim(q)
             for q in polys]
    cache = {}

    def taq(alpha):
        alpha = tuple(alpha)
        while alpha and alpha[-1] == 0:
            alpha = alpha[:-1]
        if alpha in cache:
            return cache[alpha]
        prod = [1]
        for q, a in zip(polys, alpha):
            for _ in range(a):
                prod = d_mul(prod, q)
                if len(prod) >= len(f):
                    prod = d_prem(prod, f, even=True)[1]
        val = tarski_query(prod, f, sign)
        cache[alpha] = val
        return val

    r = taq(())
    if r == 0:
        return []
    signs, counts, ada = [()], [r], [()]
    for i in range(len(polys)):
        cand = [s + (e,) for s in signs for e in _SIGN_COLS]
        rows = [a + (x,) for a in ada for x in (0, 1, 2)]
        M = [[_entry(a, s) for s in cand] for a in rows]
        c = _solve_exact(M, [taq(a) for a in rows])
        keep = [j for j, v in enumerate(c) if v != 0]
        signs = [cand[j] for j in keep]
        counts = [int(c[j]) for j in keep]
        sub = [[row[j] for j in keep] for row in M]
        chosen = _rank_select(sub, len(keep))
        ada = [rows[j] for j in chosen]
    return list(zip(signs, counts))


def thom_compare_same(s1, s2):
    """Order two Thom encodings of the same polynomial (signs of f', f'', ...).

    Returns -1, 0 or 1.  ``s[j]`` is the sign of the (j+1)-th derivative.
    """
    if tuple(s1) == tuple(s2):
        return 0
    n = len(s1)
    k = max(j for j in range(n) if s1[j] != s2[j])
    above = s1[k + 1] if k + 1 < n else 1
    if above == 0:
        raise ValueError("not Thom encodings of roots of one polynomial")
    if s1[k] < s2[k]:
        less = above > 0
    else:
        less = above < 0
    return -1 if less else 1


# Thom encodings -------------------------------------------------------------------

@dataclass(frozen=True)
class ThomEncoding:
    """A real root of ``f`` identified by the signs of ``f', ..., f^(deg f)``."""
    f: MultiPoly
    var: str
    signs: tuple

    @property
    def full_signs(self):
        return (0,) + tuple(self.signs)

    def multiplicity(self):
        m = 1
        for sg in self.signs:
            if sg != 0:
                break
            m += 1
        return m

    def __str__(self):
        sym = {1: "+", -1: "-", 0: "0"}
        return "(%s, [%s])" % (self.f, ",".join(sym[s] for s in self.signs))


def _der_dense(f):
    out = []
    d = d_deriv(f)
    while d:
        out.append(d)
        d = d_deriv(d)
    return out


def thom_encodings_of_roots(f, var=None, sign=default_sign):
    """Thom encodings of the distinct real roots of ``f`` in increasing order.

    >>> from babygiant.poly import poly
    >>> from babygiant.univariate import thom_encodings_of_roots
    >>> [e.signs for e in thom_encodings_of_roots(poly("t^2 - 2"))]
    [(-1, 1), (1, 1)]
    """
    P = MultiPoly.coerce(f) if not isinstance(f, list) else None
    if var is None and P is not None:
        if len(P.vars) > 1:
            raise ValueError("variable needed")
        var = P.vars[0] if P.vars else "t"
    fd = as_dense(f, var)
    if not fd:
        raise ValueError("zero polynomial")
    if len(fd) == 1:
        return []
    ders = _der_dense(fd)
    conds = sign_conditions(fd, ders, sign)
    encs = sorted((s for s, _ in conds), key=cmp_to_key(thom_compare_same))
    fp = P if P is not None else _to_poly(fd, var)
    return [ThomEncoding(fp, var, tuple(s)) for s in encs]


def sign_determination(f, P_list, var=None, sign=default_sign):
    """Signs of every polynomial of ``P_list`` at each real root of ``f``.

    Returns ``[(root_index, signs), ...]`` in increasing root order.

    >>> from babygiant.poly import poly
    >>> from babygiant.univariate import sign_determination
    >>> sign_determination(poly("t^2 - 2"), [poly("t")])
    [(0, (-1,)), (1, (1,))]
    """
    if var is None:
        names = set()
        for q in [f] + list(P_list):
            names |= set(MultiPoly.coerce(q).vars)
        if len(names) > 1:
            raise ValueError("variable needed")
        var = names.pop() if names else "t"
    fd = as_dense(f, var)
    if not fd:
        raise ValueError("zero polynomial")
    if len(fd) == 1:
        return []
    ders = _der_dense(fd)
    qs = [as_dense(q, var) for q in P_list]
    conds = sign_conditions(fd, ders + qs, sign)
    nd = len(ders)
    rows = sorted((s for s, _ in conds), key=cmp_to_key(lambda a, b: thom_compare_same(a[:nd], b[:nd])))
    return [(i, tuple(s[nd:])) for i, s in enumerate(rows)]


def compare_thom(e1, e2, sign=default_sign):
    """Compare the real numbers encoded by two Thom encodings: '<', '=' or '>'."""
    if e1.var != e2.var:
        e2 = ThomEncoding(e2.f.rename({e2.var: e1.var}), e1.var, e2.signs)
    var = e1.var
    f, g = as_dense(e1.f, var), as_dense(e2.f, var)
    df, dg = _der_dense(f), _der_dense(g)
    if len(df) != len(e1.signs) or len(dg) != len(e2.signs):
        raise ValueError("invalid encoding")
    if f == g:
        c = thom_compare_same(e1.signs, e2.signs)
        return "<=>"[c + 1]
    h = d_mul(f, g)
    dh = _der_dense(h)
    polys = dh + [f, g] + df + dg
    conds = sign_conditions(h, polys, sign)
    nh = len(dh)
    x = y = None
    for s, _ in conds:
        sf, sg = s[nh], s[nh + 1]
        rest = s[nh + 2:]
        if sf == 0 and tuple(rest[:len(df)]) == tuple(e1.signs):
            x = s[:nh]
        if sg == 0 and tuple(rest[len(df):]) == tuple(e2.signs):
            y = s[:nh]
    if x is None or y is None:
        raise ValueError("invalid encoding: no realizing root")
    c = thom_compare_same(x, y)
    return "<=>"[c + 1]
