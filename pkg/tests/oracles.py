"""Independent reference computations used by the tests.

Real roots come from flint's certified complex root isolation (real roots are
returned with an exactly zero imaginary part).  Signs at a root are read from
ball evaluation; a ball containing zero is settled exactly by checking whether
the root is also a root of the gcd.  Resultants come from a Sylvester matrix
determinant computed with fractions.
"""

from fractions import Fraction

import flint


def _fz(coeffs):
    return flint.fmpz_poly([int(c) for c in coeffs])


def _real_roots(f, prec):
    old = flint.ctx.prec
    flint.ctx.prec = prec
    try:
        if f.degree() <= 0:
            return []
        out = []
        for r, _ in f.complex_roots():
            if r.imag == 0:
                out.append(r.real)
        return out
    finally:
        flint.ctx.prec = old


def real_root_count(coeffs):
    f = _fz(coeffs)
    sq = f // f.gcd(f.derivative()) if f.degree() > 0 else f
    return len(_real_roots(sq, 64))


def signs_at_roots(f_coeffs, q_list, prec=128):
    """For each distinct real root of ``f`` in increasing order, the signs of the ``q``."""
    f = _fz(f_coeffs)
    sq = f // f.gcd(f.derivative())
    qs = [_fz(q) for q in q_list]
    while True:
        roots = sorted(_real_roots(sq, prec), key=lambda b: float(b.mid()))
        rows = []
        ok = True
        for r in roots:
            row = []
            for q in qs:
                old = flint.ctx.prec
                flint.ctx.prec = prec
                try:
                    v = sum((flint.arb(int(c)) * r ** i for i, c in enumerate(q.coeffs())), flint.arb(0))
                finally:
                    flint.ctx.prec = old
                if v > 0:
                    row.append(1)
                elif v < 0:
                    row.append(-1)
                elif _is_common_root(sq, q, r, prec):
                    row.append(0)
                else:
                    ok = False
                    break
            if not ok:
                break
            rows.append(tuple(row))
        if ok:
            return rows
        prec *= 2


def _is_common_root(sq, q, r, prec):
    if q == 0:
        return True
    g = sq.gcd(q)
    if g.degree() <= 0:
        return False
    return any(r.overlaps(s) for s in _real_roots(g, prec))


def derivatives(coeffs):
    out = []
    d = list(coeffs)
    while len(d) > 1:
        d = [i * c for i, c in enumerate(d)][1:]
        out.append(d)
    return out


def determinant(M):
    M = [[Fraction(x) for x in row] for row in M]
    n = len(M)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det *= M[i][i]
        for r in range(i + 1, n):
            f = M[r][i] / M[i][i]
            for c in range(i, n):
                M[r][c] -= f * M[i][c]
    return det


def sylvester_resultant(P, Q):
    """Determinant of the Sylvester matrix (coefficient lists, constant term first)."""
    p, q = len(P) - 1, len(Q) - 1
    n = p + q
    rows = []
    for i in range(q):
        rows.append([0] * i + list(reversed(P)) + [0] * (n - p - 1 - i))
    for i in range(p):
        rows.append([0] * i + list(reversed(Q)) + [0] * (n - q - 1 - i))
    return determinant(rows)
