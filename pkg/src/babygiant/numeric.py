"""
Rigorous ball arithmetic helpers on top of python-flint's arb/acb types.

Balls are only ever used to *decide* signs when zero is excluded, or to
isolate roots of polynomials known to be squarefree with a nonvanishing
leading coefficient.  Every other decision is made exactly.
"""

from contextlib import contextmanager
from fractions import Fraction

import flint

from .arith import EpsScalar

__all__ = ["to_arb", "arb_to_fraction", "eval_arb", "working_prec", "real_root_balls",
           "ball_sign", "ball_float"]


@contextmanager
def working_prec(bits):
    old = flint.ctx.prec
    flint.ctx.prec = max(int(bits), 53)
    try:
        yield
    finally:
        flint.ctx.prec = old


def to_arb(c):
    if isinstance(c, int):
        return flint.arb(c)
    if isinstance(c, Fraction):
        return flint.arb(flint.fmpq(c.numerator, c.denominator))
    if isinstance(c, EpsScalar):
        raise ValueError("eps has no numeric value")
    if isinstance(c, flint.arb):
        return c
    raise TypeError("cannot convert %r" % (c,))


def arb_to_fraction(x):
    """Exact value of an exact arb (for example ``ball.lower()``)."""
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def eval_arb(p, values):
    """Evaluate a MultiPoly at a dict of arb values."""
    pos = [values[v] for v in p.vars]
    powers = [dict() for _ in pos]
    total = flint.arb(0)
    for m, c in p.terms.items():
        t = to_arb(c)
        for i, e in enumerate(m):
            if e:
                cache = powers[i]
                if e not in cache:
                    cache[e] = pos[i] ** e
                t = t * cache[e]
        total += t
    return total


def ball_sign(x):
    """Sign of an arb ball, or None when it contains zero."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return None


def ball_float(x):
    return float(x.mid())


def real_root_balls(coeffs, prec):
    """Isolate the real roots of a squarefree polynomial with ball coefficients.

    ``coeffs`` are arb balls, lowest degree first, with a leading coefficient
    whose ball excludes zero.  Returns sorted arb balls, one per real root, or
    None when the precision is insufficient to certify the answer.
    """
    if not (coeffs[-1] > 0 or coeffs[-1] < 0):
        return None
    d = len(coeffs) - 1
    if d == 0:
        return []
    if d == 1:
        return [-coeffs[0] / coeffs[1]]
    poly = flint.acb_poly([flint.acb(c) for c in coeffs])
    try:
        roots = poly.roots(tol=flint.arb(2) ** (-prec), maxprec=4 * prec)
    except (ValueError, ArithmeticError):
        # the tolerance can be out of reach for imprecise coefficients
        try:
            roots = poly.roots(tol=flint.arb(2) ** (-(prec // 2)), maxprec=4 * prec)
        except (ValueError, ArithmeticError):
            return None
    if len(roots) != d:
        return None
    out = []
    for i, r in enumerate(roots):
        im = r.imag
        if not im.contains(0):
            continue
        conj = r.conjugate()
        clash = any(j != i and conj.overlaps(s) for j, s in enumerate(roots))
        if clash:
            return None
        out.append(r.real)
    out.sort(key=lambda b: float(b.mid()))
    for a, b in zip(out, out[1:]):
        if a.overlaps(b):
            return None
    return out
