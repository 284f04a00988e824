"""
Triangular Thom encodings and computations over the point they encode.

A :class:`TriangularThomEncoding` is a chain of levels.  Level ``i`` is a
polynomial ``f_i`` in the variables of levels ``1..i`` together with the
signs of its derivatives with respect to its own variable at the encoded
root.  The encoded point ``t`` is therefore pinned exactly; floating balls
are kept alongside only to speed up sign decisions.

Signs at ``t`` are decided as follows.

* Levels free of eps: the polynomial is evaluated in ball arithmetic; if
  zero cannot be excluded after a refinement, an exact zero test is run
  (subresultant gcd with the level polynomial, then a sign change test on
  the isolating interval of the root).
* Levels with eps coefficients: recursive sign determination through
  Tarski queries, the signs of the subresultant coefficients being decided
  one level down.
* An eps-polynomial evaluated over an eps-free point: the sign of the
  lowest order coefficient that does not vanish at ``t``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

from . import flintbridge as fb
from .arith import EpsScalar, scalar_sign, active_ledger
from .poly import MultiPoly, ZERO, ONE, pseudo_divmod, pseudo_remainder
from .univariate import (ThomEncoding, sign_conditions, d_deriv, d_prem,
                         _subres_dense, thom_compare_same, _der_dense, _to_poly,
                         subresultant_coefficients)
from .numeric import (to_arb, arb_to_fraction, eval_arb, working_prec, real_root_balls,
                      ball_sign)

__all__ = [
    "TriangularThomEncoding", "NotInvertible", "IdenticallyZero",
    "RealUnivariateRep", "ParamUnivariateRep", "BlockRepresentation",
    "pseudo_reduce", "pseudo_invert", "triangular_sign_determination",
    "triangular_thom_encodings", "triangular_sample_points", "restricted_elimination",
    "bounded_algebraic_sampling", "substitute_block", "substitute_block_in_rep",
    "make_quasi_monic", "EMPTY",
]

START_PREC = 64


class NotInvertible(ValueError):
    pass


class IdenticallyZero(ValueError):
    pass


def _dense(p, var):
    return [MultiPoly.coerce(c) for c in MultiPoly.coerce(p).coeffs_in(var)]


def _strip_dense(a):
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def _const(p):
    return p.constant_value() if isinstance(p, MultiPoly) else p


class TriangularThomEncoding:
    """A real point pinned by a triangular system and derivative signs.

    >>> from babygiant.poly import poly
    >>> from babygiant.triangular import TriangularThomEncoding
    >>> t = TriangularThomEncoding([poly("t1^2 - 2")], [(1, 1)])
    >>> t.sign(poly("t1^3 - t1"))
    1
    """

    def __init__(self, levels=(), signs=(), vars_=None, *, _parent=None, _numeric=None):
        levels = [MultiPoly.coerce(f) for f in levels]
        if vars_ is None:
            vars_ = ["t%d" % (i + 1) for i in range(len(levels))] if _parent is None else []
        if len(signs) != len(levels) or len(vars_) != len(levels):
            raise ValueError("levels, signs and variables must have equal length")
        if _parent is None and len(levels) > 1:
            parent = TriangularThomEncoding(levels[:-1], signs[:-1], vars_[:-1])
        elif _parent is None and len(levels) == 1:
            parent = EMPTY if "EMPTY" in globals() else None
        else:
            parent = _parent
        self.parent = parent
        base_vars = parent.vars if parent is not None else ()
        base_levels = parent.levels if parent is not None else ()
        base_signs = parent.signs if parent is not None else ()
        if levels:
            self.var = vars_[-1]
            self.level = levels[-1]
            self.sign_vec = tuple(int(s) for s in signs[-1])
            if self.var in base_vars:
                raise ValueError("repeated tower variable %s" % self.var)
            self.vars = base_vars + (self.var,)
            self.levels = base_levels + (self.level,)
            self.signs = base_signs + (self.sign_vec,)
            deg = self.level.degree(self.var)
            if deg < 1:
                raise ValueError("level polynomial must have positive degree in %s" % self.var)
            if len(self.sign_vec) != deg:
                raise ValueError("sign vector must list the signs of %d derivatives" % deg)
        else:
            self.var = None
            self.level = None
            self.sign_vec = ()
            self.vars = ()
            self.levels = ()
            self.signs = ()
        self._sign_cache = {}
        # numeric state of the top level
        self._num = _numeric

    # basic structure -------------------------------------------------------------
    def __len__(self):
        return len(self.levels)

    def __eq__(self, other):
        return (isinstance(other, TriangularThomEncoding) and self.vars == other.vars
                and self.levels == other.levels and self.signs == other.signs)

    def __hash__(self):
        return hash((self.vars, self.levels, self.signs))

    def __repr__(self):
        sym = {1: "+", -1: "-", 0: "0"}
        parts = ["%s: %s [%s]" % (v, f, "".join(sym[s] for s in sg))
                 for v, f, sg in zip(self.vars, self.levels, self.signs)]
        return "TriangularThomEncoding(%s)" % "; ".join(parts)

    @property
    def quasi_monic(self):
        for v, f in zip(self.vars, self.levels):
            lc = f.leading_coeff(v)
            if not lc.is_constant():
                return False
            c = lc.constant_value()
            if isinstance(c, EpsScalar) or c <= 0:
                return False
        return True

    @property
    def has_eps(self):
        return any(f.has_eps() for f in self.levels)

    def prefix(self, i):
        """The encoding made of the first ``i`` levels."""
        node = self
        while len(node) > i:
            node = node.parent if node.parent is not None else EMPTY
        return node

    def chain(self):
        out = []
        node = self
        while len(node) > 0:
            out.append(node)
            node = node.parent if node.parent is not None else EMPTY
        return list(reversed(out))

    def extend(self, var, level, signs, _numeric=None):
        """New encoding with one more level on top."""
        return TriangularThomEncoding([level], [signs], [var], _parent=self, _numeric=_numeric)

    def rename(self, mapping):
        vs = [mapping.get(v, v) for v in self.vars]
        return TriangularThomEncoding([f.rename(mapping) for f in self.levels], self.signs, vs)

    def top_index(self, h):
        """Index of the highest level whose variable occurs in ``h`` (-1 if none)."""
        idx = -1
        for v in h.vars:
            if v in self.vars:
                idx = max(idx, self.vars.index(v))
            elif v != "eps":
                raise ValueError("variable %s is not a tower variable" % v)
        return idx

    # numeric state -------------------------------------------------------------
    def _numeric_state(self, prec=START_PREC):
        """Ensure the top level has numeric data of at least ``prec`` bits."""
        if len(self) == 0:
            return None
        st = self._num
        if st is not None and st["prec"] >= prec:
            return st
        if self.level.has_eps():
            raise ValueError("numeric data requested for an eps level")
        parent = self.parent if self.parent is not None else EMPTY
        if st is None:
            st = self._init_numeric(parent, prec)
        else:
            st = self._refine_numeric(parent, st, prec)
        self._num = st
        return st

    def _lower_values(self, parent, prec):
        vals = {}
        exact = {}
        for node in parent.chain():
            s = node._numeric_state(prec)
            if s["exact"] is not None:
                exact[node.var] = s["exact"]
            else:
                vals[node.var] = s["ball"]
        return vals, exact

    def _init_numeric(self, parent, prec):
        f = self.level
        v = self.var
        coeffs = _dense(f, v)
        if parent.sign(coeffs[-1]) == 0:
            raise ValueError("leading coefficient of level %s vanishes at the base point" % v)
        sq = parent.squarefree_part(coeffs)
        cand = parent._isolate(sq, prec)
        if len(sq) == 2:
            # linear level: one root, possibly exact
            return self._linear_state(parent, sq, prec)
        ders = _der_dense(_dense(f, v))
        if len(cand) == 1 and not any(s == 0 for s in self.sign_vec):
            (ball, p2), = cand
            return {"prec": p2, "ball": ball, "sq": sq, "exact": None, "interval": None}
        for ball, p2 in cand:
            st = {"prec": p2, "ball": ball, "sq": sq, "exact": None, "interval": None}
            trial = TriangularThomEncoding([_to_poly(sq, v)], [tuple(1 for _ in range(len(sq) - 1))],
                                           [v], _parent=parent, _numeric=st)
            sg = tuple(trial.sign(_to_poly(d, v)) for d in ders)
            if sg == self.sign_vec:
                return st
        raise ValueError("sign condition %s is not realized by a root of %s" % (self.sign_vec, f))

    def _linear_state(self, parent, sq, prec):
        a0, a1 = sq[0], sq[1]
        sub0, sub1 = parent.substitute_exact(a0), parent.substitute_exact(a1)
        if sub0.is_constant() and sub1.is_constant():
            val = Fraction(-_const(sub0)) / _const(sub1)
            return {"prec": 10 ** 9, "ball": to_arb(val), "sq": sq, "exact": val,
                    "interval": (val, val)}
        (ball, p2), = parent._isolate(sq, prec)
        return {"prec": p2, "ball": ball, "sq": sq, "exact": None, "interval": None}

    def _refine_numeric(self, parent, st, prec):
        if st["exact"] is not None:
            return st
        cand = parent._isolate(st["sq"], prec)
        old = st["ball"]
        hits = [(b, p2) for b, p2 in cand if b.overlaps(old)]
        if len(hits) != 1:
            raise RuntimeError("lost track of a root while refining")
        b, p2 = hits[0]
        return dict(st, prec=p2, ball=b, interval=None)

    def values(self, prec=START_PREC):
        """(balls, exact) dictionaries for every level."""
        vals, exact = {}, {}
        for node in self.chain():
            s = node._numeric_state(prec)
            if s["exact"] is not None:
                exact[node.var] = s["exact"]
            else:
                vals[node.var] = s["ball"]
        return vals, exact

    def approx(self, prec=START_PREC):
        """Floating approximations of the coordinates of ``t``."""
        vals, exact = self.values(prec)
        return [float(exact[v]) if v in exact else float(vals[v].mid()) for v in self.vars]

    def substitute_exact(self, h):
        """Substitute the levels whose value is rational."""
        if self.has_eps:
            return h
        _, exact = self.values()
        return h.subs(exact) if exact else h

    def isolating_interval(self):
        """Rational ``(lo, hi)`` containing only the top root of its level polynomial."""
        st = self._numeric_state()
        if st["exact"] is not None:
            return st["exact"], st["exact"]
        if st.get("interval") is None:
            parent = self.parent if self.parent is not None else EMPTY
            sq = st["sq"]
            while True:
                ball = st["ball"]
                lo, hi = arb_to_fraction(ball.lower()), arb_to_fraction(ball.upper())
                f_lo = parent.sign(_to_poly(sq, self.var).subs({self.var: lo}))
                f_hi = parent.sign(_to_poly(sq, self.var).subs({self.var: hi}))
                if f_lo * f_hi < 0:
                    st["interval"] = (lo, hi)
                    break
                hit = lo if f_lo == 0 else (hi if f_hi == 0 else None)
                if hit is not None:
                    # the ball holds a single root, so it is this rational
                    st["exact"] = hit
                    st["interval"] = (hit, hit)
                    self._sign_cache.clear()
                    break
                if st["prec"] > 1 << 16:
                    raise RuntimeError("could not isolate root with rational endpoints")
                st = self._numeric_state(2 * st["prec"])
        return st["interval"]

    def _isolate(self, sq, prec):
        """Real roots of the squarefree dense polynomial ``sq`` over this point.

        Returns ``[(ball, prec_used), ...]`` in increasing order.
        """
        p = prec
        for _ in range(12):
            vals, exact = self.values(p)
            with working_prec(p + 20):
                cb = []
                for c in sq:
                    c2 = c.subs(exact) if exact else c
                    cb.append(eval_arb(c2, vals) if not c2.is_constant()
                              else to_arb(c2.constant_value()))
                rr = real_root_balls(cb, p)
            if rr is not None:
                return [(b, p) for b in rr]
            p *= 2
        raise RuntimeError("root isolation did not converge")

    # exact operations at t ------------------------------------------------------
    def squarefree_part(self, coeffs):
        """Squarefree part at ``t`` of a dense polynomial over this point.

        The leading coefficient must not vanish at ``t``.
        """
        coeffs = _strip_dense(coeffs)
        if len(coeffs) <= 2:
            return coeffs
        der = d_deriv(coeffs)
        der = [MultiPoly.coerce(c) for c in der]
        D = euclid_at(self, coeffs, der)
        if len(D) <= 1:
            return reduce_dense(self, coeffs)
        C = fb.pseudo_quotient(coeffs, D)
        return reduce_dense(self, _primitive_dense(C))

    def sign(self, h):
        """Exact sign of ``h`` at the encoded point."""
        h = MultiPoly.coerce(h)
        key = h
        hit = self._sign_cache.get(key)
        if hit is not None:
            return hit
        sg = self._sign(h)
        self._sign_cache[key] = sg
        return sg

    def _sign(self, h):
        if h.is_constant():
            return scalar_sign(h.constant_value())
        i = self.top_index(h)
        if i < 0:
            return scalar_sign(h.constant_value()) if h.is_constant() else self._eps_coefficientwise(h, -1)
        node = self.prefix(i + 1)
        if node is not self:
            return node.sign(h)
        if self.level.has_eps() or (self.parent is not None and self.parent.has_eps):
            return self._sign_tarski(h)
        if h.has_eps():
            return self._eps_coefficientwise(h, i)
        return self._sign_numeric(h)

    def _eps_coefficientwise(self, h, i):
        parts = h.eps_parts()
        signs = [self.sign(p) if not p.is_zero() else 0 for p in parts]
        for k, sg in enumerate(signs):
            if sg != 0:
                if any(s != 0 for s in signs[k + 1:]):
                    ledger = active_ledger()
                    if ledger is not None:
                        ledger.record([self._enclosure(p) for p in parts])
                return sg
        return 0

    def _enclosure(self, p):
        if p.is_zero():
            return (Fraction(0), Fraction(0))
        if p.is_constant():
            c = Fraction(p.constant_value())
            return (c, c)
        vals, exact = self.values()
        with working_prec(START_PREC + 20):
            b = eval_arb(p.subs(exact) if exact else p, vals) if not (p.subs(exact) if exact else p).is_constant() \
                else to_arb((p.subs(exact)).constant_value())
            return arb_to_fraction(b.lower()), arb_to_fraction(b.upper())

    def _sign_numeric(self, h):
        self._numeric_state()
        prec = START_PREC
        tried_exact = False
        for attempt in range(40):
            vals, exact = self.values(prec)
            h2 = h.subs(exact) if exact else h
            if h2.is_constant():
                return scalar_sign(h2.constant_value())
            with working_prec(prec + 20):
                val = eval_arb(h2, vals)
            s = ball_sign(val)
            if s is not None:
                return s
            if not tried_exact:
                tried_exact = True
                if self.is_zero(h):
                    return 0
            prec *= 2
        raise RuntimeError("sign evaluation did not terminate")

    def is_zero(self, h):
        """Exact test ``h(t) == 0``."""
        h = MultiPoly.coerce(h)
        if h.is_zero():
            return True
        i = self.top_index(h)
        if i < 0:
            if h.has_eps():
                return all(self.is_zero(p) for p in h.eps_parts())
            return h.is_zero()
        node = self.prefix(i + 1)
        if node is not self:
            return node.is_zero(h)
        if self.has_eps or h.has_eps():
            return self.sign(h) == 0
        parent = self.parent if self.parent is not None else EMPTY
        st = self._numeric_state()
        if st["exact"] is not None:
            return parent.is_zero(h.subs({self.var: st["exact"]}))
        sq = st["sq"]
        v = self.var
        hd = _dense(h, v)
        if len(hd) >= len(sq):
            hd = _dense(fb.prem(h, _to_poly(sq, v), v), v)
        while hd and parent.is_zero(hd[-1]):
            hd.pop()
        if not hd:
            return True
        if len(hd) == 1:
            return parent.is_zero(hd[0])
        if st.get("irreducible") and all(c.is_constant() for c in hd):
            # nonzero remainder of lower degree than an irreducible polynomial
            return False
        # gcd of sq and hd at the base point
        Dd = euclid_at(parent, sq, hd)
        if len(Dd) <= 1:
            return False
        D = _to_poly(Dd, v)
        lo, hi = self.isolating_interval()
        a = parent.sign(D.subs({v: lo}))
        b = parent.sign(D.subs({v: hi}))
        return a * b < 0

    def _sign_tarski(self, h):
        parent = self.parent if self.parent is not None else EMPTY
        v = self.var
        f = _dense(self.level, v)
        hd = _dense(h, v)
        if len(hd) >= len(f):
            hd = d_prem(hd, f, even=True)[1]
        hd = _strip_dense([MultiPoly.coerce(c) for c in hd])
        if not hd:
            return 0
        if len(hd) == 1:
            return parent.sign(hd[0])
        ders = _der_dense(f)
        conds = sign_conditions(f, ders + [hd], sign=parent.sign)
        for sg, _ in conds:
            if tuple(sg[:-1]) == self.sign_vec:
                return sg[-1]
        raise ValueError("encoding is not realized")

    # roots over t ------------------------------------------------------------------
    def roots(self, h, var):
        """Extensions of this point by every real root of ``h(t, var)``, increasing.

        Raises IdenticallyZero when ``h(t, .)`` vanishes identically.
        """
        h = MultiPoly.coerce(h)
        coeffs = _dense(h, var)
        while coeffs and self.sign(coeffs[-1]) == 0:
            coeffs.pop()
        if not coeffs:
            raise IdenticallyZero("polynomial vanishes identically at the base point")
        if len(coeffs) == 1:
            return []
        if self.has_eps or any(c.has_eps() for c in coeffs):
            return self._roots_tarski(coeffs, var)
        parts = [coeffs]
        if len(coeffs) > 2:
            from .flintbridge import irreducible_factors
            parts = []
            for f in irreducible_factors(self.substitute_exact(_to_poly(coeffs, var))):
                fd = _dense(f, var)
                while fd and self.sign(fd[-1]) == 0:
                    fd.pop()
                if len(fd) > 1:
                    parts.append(fd)
        out = []
        for fd in parts:
            for node in self._roots_of(fd, var):
                if not any(abs(a - b) < 1e-8 and self.compare_roots(node, o) == 0
                           for o in out for a, b in [(node.approx()[-1], o.approx()[-1])]):
                    out.append(node)
        return self._sort_roots(out)

    def _sort_roots(self, nodes):
        from functools import cmp_to_key

        def cmp(a, b):
            fa, fb = a.approx()[-1], b.approx()[-1]
            if abs(fa - fb) > 1e-8 * (1 + abs(fa)):
                return -1 if fa < fb else 1
            return self.compare_roots(a, b)
        return sorted(nodes, key=cmp_to_key(cmp))

    def _roots_of(self, coeffs, var):
        sq = self.squarefree_part(coeffs)
        if len(sq) == 2:
            return [self.extend(var, _to_poly(sq, var), (self.sign(sq[1]),))]
        out = []
        irreducible = len(self) == 0 and len(parts_check(sq)) == 1
        for ball, p in self._isolate(sq, START_PREC):
            st = {"prec": p, "ball": ball, "sq": sq, "exact": None, "interval": None,
                  "irreducible": irreducible}
            node = TriangularThomEncoding([_to_poly(sq, var)], [tuple([1] * (len(sq) - 1))],
                                          [var], _parent=self, _numeric=st)
            ders = _der_dense(sq)
            sg = tuple(node.sign(_to_poly(d, var)) for d in ders)
            node.sign_vec = sg
            node.signs = node.signs[:-1] + (sg,)
            out.append(node)
        return out

    def _roots_tarski(self, coeffs, var):
        ders = _der_dense(coeffs)
        conds = sign_conditions(coeffs, ders, sign=self.sign)
        from functools import cmp_to_key
        encs = sorted((s for s, _ in conds), key=cmp_to_key(thom_compare_same))
        poly = _to_poly(coeffs, var)
        return [self.extend(var, poly, tuple(s)) for s in encs]

    def compare_roots(self, a, b):
        """Compare the top coordinates of two extensions of this point: -1, 0, 1."""
        va, vb = a.var, b.var
        if va == vb:
            b = TriangularThomEncoding([b.level.rename({vb: "u_cmp"})], [b.sign_vec], ["u_cmp"],
                                       _parent=self, _numeric=b._num)
            vb = "u_cmp"
        joint = TriangularThomEncoding([b.level], [b.sign_vec], [vb], _parent=a, _numeric=b._num)
        return joint.sign(MultiPoly.var(va) - MultiPoly.var(vb))


def parts_check(sq):
    """Irreducible factors over Q of a dense list with rational entries (or [sq] otherwise)."""
    if not all(MultiPoly.coerce(c).is_constant() for c in sq):
        return [sq]
    from .flintbridge import irreducible_factors
    return irreducible_factors(_to_poly(sq, "_z"))


def _primitive_dense(C):
    """Divide a dense list of polynomials by the integer content of the whole list."""
    p = _to_poly(C, "_z")
    if p.is_zero():
        return C
    q = p.primitive()
    if q.monic_sign() < 0 and False:
        q = -q
    return [MultiPoly.coerce(c) for c in _strip_dense(q.coeffs_in("_z"))]


EMPTY = TriangularThomEncoding()


# pseudo reduction and inversion ----------------------------------------------------

def _strip_at(enc, d):
    d = _strip_dense([MultiPoly.coerce(c) for c in d])
    while d and enc.sign(d[-1]) == 0:
        d.pop()
    return d


def euclid_at(enc, a, b):
    """Gcd at the point of ``enc`` of two dense polynomials.

    Euclid's algorithm with pseudo-remainders whose coefficients are kept
    reduced modulo the levels and whose vanishing leading coefficients are
    dropped, so sizes stay bounded by the tower degrees.
    """
    A, B = _strip_at(enc, a), _strip_at(enc, b)
    if len(A) < len(B):
        A, B = B, A
    if not B:
        return A
    if len(enc) == 0 and not any(c.has_eps() for c in A + B):
        g = fb.gcd(_to_poly(A, "_g"), _to_poly(B, "_g"))
        return _dense(g, "_g") if "_g" in g.vars else [ONE]
    var = "_g"
    while B:
        if len(B) == 1:
            return [ONE]
        R = _dense(fb.prem(_to_poly(A, var), _to_poly(B, var), var), var) \
            if len(A) >= len(B) else A
        R = _strip_at(enc, reduce_dense(enc, R) if R else R)
        A, B = B, R
    return A


def reduce_dense(enc, d):
    """Coefficients of a dense polynomial reduced modulo the levels of ``enc``.

    The whole polynomial gets multiplied by powers of leading coefficients
    that do not vanish at the point, so its roots there are unchanged.
    """
    if len(enc) == 0 or len(d) <= 1:
        return d
    var = "_r"
    P = _to_poly(d, var)
    for v, lvl in reversed(list(zip(enc.vars, enc.levels))):
        if P.degree(v) >= lvl.degree(v):
            P = fb.prem(P, lvl, v)
    out = [MultiPoly.coerce(c) for c in P.coeffs_in(var)] if var in P.vars else [P]
    return _strip_dense(out) if not P.is_zero() else d


def pseudo_reduce(f, enc):
    """Iterated pseudo-remainders modulo the levels, top level first.

    The sign at ``t`` is preserved because every leading coefficient is a
    positive rational.
    """
    if not enc.quasi_monic:
        raise ValueError("pseudo_reduce needs a quasi-monic encoding")
    f = MultiPoly.coerce(f)
    for v, lvl in reversed(list(zip(enc.vars, enc.levels))):
        if f.degree(v) >= lvl.degree(v):
            f = pseudo_remainder(f, lvl, v)
    return f


def _reduce_any(f, enc):
    """Pseudo-reduction with even exponents (sign preserving for any encoding)."""
    f = MultiPoly.coerce(f)
    for v, lvl in reversed(list(zip(enc.vars, enc.levels))):
        if f.degree(v) >= lvl.degree(v):
            f = pseudo_remainder(f, lvl, v, even=True)
    return f


def pseudo_invert(f, enc):
    """Pseudo-inverse of ``f`` at the point encoded by ``enc``.

    Returns ``(g, c, enc2)`` with ``f*g = c`` modulo the levels of ``enc2``,
    ``c`` a positive rational, and ``enc2`` encoding the same point (the top
    level may have been replaced by a factor discovered along the way).
    """
    f = MultiPoly.coerce(f)
    if enc.sign(f) == 0:
        raise NotInvertible("not invertible at encoded point")
    return _pseudo_invert(f, enc)


def _pseudo_invert(f, enc):
    if len(enc) == 0:
        c = f.constant_value()
        if isinstance(c, EpsScalar):
            s = scalar_sign(c)
            return MultiPoly.constant(s), c * s, enc
        return (ONE, c, enc) if c > 0 else (-ONE, -c, enc)
    v = enc.var
    parent = enc.parent if enc.parent is not None else EMPTY
    while True:
        td = _dense(enc.level, v)
        fd = _dense(f, v)
        mult = ONE
        if len(fd) >= len(td):
            e = len(fd) - len(td) + 1
            e += e % 2
            fd = _strip_dense([MultiPoly.coerce(c) for c in d_prem(fd, td, even=True)[1]])
            mult = td[-1] ** e
        if len(fd) == 1:
            g1, c1, p2 = _pseudo_invert(fd[0], parent)
            g = g1 * mult
            break
        S, s, U, V = _subres_dense(td, fd)
        j = next(jj for jj in range(len(td) - 1) if parent.sign(MultiPoly.coerce(s[jj])) != 0)
        if j == 0:
            V0 = _to_poly([MultiPoly.coerce(c) for c in V[0]], v)
            g1, c1, p2 = _pseudo_invert(MultiPoly.coerce(s[0]), parent)
            # V0*fd = sRes_0 modulo the top level
            g = g1 * V0 * mult
            break
        # f and the level share a factor vanishing here: keep the other factor
        D = _to_poly([MultiPoly.coerce(c) for c in S[j]], v)
        C, _ = pseudo_divmod(enc.level, D, v)
        top = C.primitive()
        lc = top.leading_coeff(v)
        if lc.is_constant() and scalar_sign(lc.constant_value()) < 0:
            top = -top
        enc = parent.extend(v, top, _signs_at_same_root(enc, top, v))
    if p2 is not parent:
        enc = p2.extend(v, enc.level, enc.sign_vec)
    if enc.quasi_monic:
        g = _exact_reduce(g, enc)
    return g, c1, enc


def _exact_reduce(f, enc):
    """Remainder modulo a quasi-monic encoding, equal to ``f`` modulo its levels."""
    f = MultiPoly.coerce(f)
    for v, lvl in reversed(list(zip(enc.vars, enc.levels))):
        while f.degree(v) >= lvl.degree(v):
            lc = lvl.leading_coeff(v).constant_value()
            shift = f.degree(v) - lvl.degree(v)
            f = f - f.leading_coeff(v) * MultiPoly.var(v) ** shift * lvl / lc
    return f


def _signs_at_same_root(enc, newlevel, v):
    """Derivative signs of ``newlevel`` at the top root of ``enc``."""
    ders = _der_dense(_dense(newlevel, v))
    return tuple(enc.sign(_to_poly(d, v)) for d in ders)


def make_quasi_monic(enc):
    """Equivalent encoding whose leading coefficients are positive rationals."""
    out = EMPTY
    for v, f, sg in zip(enc.vars, enc.levels, enc.signs):
        lc = f.leading_coeff(v)
        if lc.is_constant() and not isinstance(lc.constant_value(), EpsScalar):
            if lc.constant_value() < 0:
                f = -f
                sg = tuple(-s for s in sg)
            out = out.extend(v, f, sg)
            continue
        g, c, out = pseudo_invert(lc, out) if len(out) else (ONE, lc.constant_value(), out)
        newf = g * f
        cs = _dense(newf, v)
        cs = [_reduce_any(cc, out) if len(out) else cc for cc in cs]
        cs[-1] = MultiPoly.constant(c)
        newf = _to_poly(cs, v)
        probe = TriangularThomEncoding([f], [sg], [v], _parent=out)
        sg2 = tuple(probe.sign(_to_poly(d, v)) for d in _der_dense(_dense(newf, v)))
        out = out.extend(v, newf, sg2)
    return out


# public operations on encodings ---------------------------------------------------

def triangular_sign_determination(enc, polys):
    """Exact signs of each polynomial at the encoded point."""
    return [enc.sign(p) for p in polys]


def triangular_thom_encodings(enc, h, var="u"):
    """Thom encodings (over ``t``) of the real roots of ``h(t, var)``, increasing."""
    h = MultiPoly.coerce(h)
    ext = enc.roots(h, var)
    ders = _der_dense(_dense(h, var))
    while ders and all(node.sign(_to_poly(ders[-1], var)) == 0 for node in ext) and False:
        ders.pop()
    hd = _dense(h, var)
    # drop leading terms vanishing at t so the derivative list matches the true degree
    while hd and enc.sign(hd[-1]) == 0:
        hd.pop()
    hp = _to_poly(hd, var)
    ders = _der_dense(hd)
    return [ThomEncoding(hp, var, tuple(node.sign(_to_poly(d, var)) for d in ders)) for node in ext]


def _simplest_between(lo_cmp, hi_cmp, lo_hint, hi_hint):
    """Simplest rational r with lo < r < hi, where lo_cmp(r) = sign(r - lo), etc.

    ``lo_hint``/``hi_hint`` are rational enclosures used to bound the search
    (None for an infinite end).
    """
    if lo_hint is None and hi_hint is None:
        return Fraction(0)
    if lo_hint is None:
        n = math.floor(hi_hint)
        while hi_cmp(Fraction(n)) >= 0:
            n -= 1
        return Fraction(n)
    if hi_hint is None:
        n = math.ceil(lo_hint)
        while lo_cmp(Fraction(n)) <= 0:
            n += 1
        return Fraction(n)
    for den in range(1, 1 << 40):
        a = math.floor(lo_hint * den)
        b = math.ceil(hi_hint * den)
        cands = sorted(range(a, b + 1), key=lambda k: (abs(k), k))
        for num in cands:
            r = Fraction(num, den)
            if lo_cmp(r) > 0 and hi_cmp(r) < 0:
                return r
        if den > 64:
            break
    # fall back to bisection of the enclosures
    r = (lo_hint + hi_hint) / 2
    while not (lo_cmp(r) > 0 and hi_cmp(r) < 0):
        if lo_cmp(r) <= 0:
            lo_hint = r
        else:
            hi_hint = r
        r = (lo_hint + hi_hint) / 2
    return r


def triangular_sample_points(enc, family, var="x"):
    """Roots of a family over ``t`` in increasing order and a rational in each gap.

    Returns ``(roots, samples)`` where ``roots`` are extensions of ``enc`` by
    the distinct roots (ordered) and ``samples`` has ``len(roots) + 1``
    rationals.

    >>> from babygiant.poly import poly
    >>> from babygiant.triangular import EMPTY, triangular_sample_points
    >>> roots, samples = triangular_sample_points(EMPTY, [poly("x^2 - 1")])
    >>> [str(s) for s in samples]
    ['-2', '0', '2']
    """
    if enc.has_eps or any(MultiPoly.coerce(f).has_eps() for f in family):
        raise NotImplementedError("rational sample points need an eps-free family")
    roots = []
    for f in family:
        for node in enc.roots(MultiPoly.coerce(f), var):
            roots.append(node)
    roots = _merge_sorted_roots(enc, roots)
    samples = []
    bounds = [None] + roots + [None]
    for lo, hi in zip(bounds, bounds[1:]):
        lo_cmp = (lambda r, node=lo: _cmp_rational(node, r)) if lo is not None else None
        hi_cmp = (lambda r, node=hi: _cmp_rational(node, r)) if hi is not None else None
        lo_hint = _interval(lo)[0] if lo is not None else None
        hi_hint = _interval(hi)[1] if hi is not None else None
        samples.append(_simplest_between(lo_cmp, hi_cmp, lo_hint, hi_hint))
    return roots, samples


def _interval(node):
    return node.isolating_interval()


def _cmp_rational(node, r):
    """sign(r - value of the top coordinate of node)."""
    return -node.sign(MultiPoly.var(node.var) - r)


def _merge_sorted_roots(enc, roots):
    from functools import cmp_to_key
    ordered = sorted(roots, key=cmp_to_key(enc.compare_roots))
    out = []
    for node in ordered:
        if out and enc.compare_roots(out[-1], node) == 0:
            continue
        out.append(node)
    return out


def restricted_elimination(f, aux, var):
    """Polynomials (in the other variables) whose signs fix the real root structure of ``f`` in ``var``.

    The family contains the coefficients of ``f``, the principal signed
    subresultant coefficients of ``f`` with each derivative and with
    ``f' * a`` for every auxiliary ``a``.  Constants are dropped and every
    member is made primitive.
    """
    f = MultiPoly.coerce(f)
    if f.degree(var) < 1:
        raise ValueError("f must have positive degree in %s" % var)
    fd = _dense(f, var)
    fam = []
    fam.extend(fd)
    ders = _der_dense(fd)
    for d in ders[1:]:
        fam.extend(subresultant_coefficients(fd, d) if len(d) < len(fd) else [])
    fam.extend(subresultant_coefficients(fd, ders[0]) if ders else [])
    for a in aux:
        ad = _dense(MultiPoly.coerce(a), var)
        prod = _dense(_to_poly(ders[0], var) * _to_poly(ad, var), var)
        if len(prod) >= len(fd):
            prod = d_prem(prod, fd, even=True)[1]
        if prod:
            fam.extend(subresultant_coefficients(fd, [MultiPoly.coerce(c) for c in prod]))
    out = []
    seen = set()
    for p in fam:
        p = MultiPoly.coerce(p)
        if p.is_zero() or p.is_constant():
            continue
        q = p.primitive()
        if q.monic_sign() < 0:
            q = -q
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


# representations -----------------------------------------------------------------

@dataclass
class RealUnivariateRep:
    """Point ``(g_1/g_0, ..., g_k/g_0)(u)`` with ``u`` the root of ``g(t, U)`` of Thom signs ``tau``."""
    g: MultiPoly
    tau: tuple
    G: tuple
    base: TriangularThomEncoding = field(default_factory=lambda: EMPTY)
    var: str = "u"

    def as_tower(self):
        return self.base.extend(self.var, self.g, tuple(self.tau))

    def coordinates(self):
        """Exact coordinate expressions (numerator, denominator) in the tower variables."""
        return [(gi, self.G[0]) for gi in self.G[1:]]

    def approx(self):
        node = self.as_tower()
        vals, exact = node.values()
        out = []
        for num, den in self.coordinates():
            out.append(_approx_ratio(num, den, vals, exact))
        return out


@dataclass
class ParamUnivariateRep:
    """Univariate representation whose coefficients keep some parameters free."""
    g: MultiPoly
    G: tuple
    params: tuple
    var: str = "u"

    def specialize(self, values, base=EMPTY):
        vals = dict(values)
        g = self.g.subs(vals)
        G = tuple(x.subs(vals) for x in self.G)
        return g, G


def _approx_ratio(num, den, vals, exact):
    n = num.subs(exact) if exact else num
    d = den.subs(exact) if exact else den
    with working_prec(START_PREC + 20):
        nv = eval_arb(n, vals) if not n.is_constant() else to_arb(n.constant_value())
        dv = eval_arb(d, vals) if not d.is_constant() else to_arb(d.constant_value())
        return float((nv / dv).mid())


@dataclass
class BlockRepresentation:
    """Blocks of coordinates given as rational functions over a triangular encoding.

    ``blocks[i]`` is ``(f0, f1, ..., f_l)``: the block's coordinates are
    ``f_j / f0`` and every entry is a polynomial in the first ``i+1`` tower
    variables.
    """
    enc: TriangularThomEncoding
    sizes: tuple
    blocks: tuple

    @classmethod
    def identity(cls, enc, sizes=None):
        sizes = tuple(sizes) if sizes is not None else (1,) * len(enc)
        blocks = []
        k = 0
        for i, l in enumerate(sizes):
            blocks.append((ONE,) + tuple(MultiPoly.var(enc.vars[k + j]) for j in range(l)))
            k += l
        return cls(enc, sizes, tuple(blocks))


def _smallest_even_at_least(n):
    return n if n % 2 == 0 else n + 1


def _block_degree(Q, names):
    d = 0
    for m in Q.terms:
        s = sum(e for v, e in zip(Q.vars, m) if v in names)
        d = max(d, s)
    return d


def _substitute(Q, blk, xvars, exps):
    Q = MultiPoly.coerce(Q)
    acc = ZERO
    idx = 0
    groups = []
    for size, block in zip(blk.sizes, blk.blocks):
        names = xvars[idx:idx + size]
        groups.append((names, block))
        idx += size
    for m, c in Q.terms.items():
        term = MultiPoly.constant(c)
        mono = dict(zip(Q.vars, m))
        for (names, block), e in zip(groups, exps):
            deg = 0
            for j, name in enumerate(names):
                a = mono.pop(name, 0)
                if a:
                    term = term * block[j + 1] ** a
                    deg += a
            if e - deg:
                term = term * block[0] ** (e - deg)
        rest = MultiPoly.from_dict({tuple(mono.values()): 1}, tuple(mono.keys())) if mono else ONE
        acc = acc + term * rest
    return acc


def substitute_block(Q, blk, xvars=None):
    """``f0(T) * Q(blocks, remaining X)`` with even block exponents.

    ``xvars`` names the coordinates replaced by the blocks (default x1, x2, ...).

    >>> from babygiant.poly import poly
    >>> from babygiant.triangular import TriangularThomEncoding, BlockRepresentation, substitute_block
    >>> enc = TriangularThomEncoding([poly("t1^2 - 2")], [(1, 1)])
    >>> blk = BlockRepresentation(enc, (1,), ((poly("2"), poly("t1")),))
    >>> print(substitute_block(poly("x1"), blk))
    2*t1
    """
    Q = MultiPoly.coerce(Q)
    n = sum(blk.sizes)
    xvars = list(xvars) if xvars is not None else ["x%d" % (i + 1) for i in range(n)]
    for node, block in zip(blk.enc.chain(), blk.blocks):
        if node.sign(block[0]) == 0:
            raise ValueError("block denominator vanishes at the encoded point")
    exps = []
    idx = 0
    for size in blk.sizes:
        exps.append(_smallest_even_at_least(_block_degree(Q, set(xvars[idx:idx + size]))))
        idx += size
    return _substitute(Q, blk, xvars, exps)


def substitute_block_in_rep(G, blk, xvars=None):
    """Apply a block substitution to every entry of a representation tuple with common exponents."""
    G = [MultiPoly.coerce(g) for g in G]
    n = sum(blk.sizes)
    xvars = list(xvars) if xvars is not None else ["x%d" % (i + 1) for i in range(n)]
    exps = []
    idx = 0
    for size in blk.sizes:
        names = set(xvars[idx:idx + size])
        exps.append(max(_block_degree(g, names) for g in G))
        idx += size
    return tuple(_substitute(g, blk, xvars, exps) for g in G)


def bounded_algebraic_sampling(P, params=(), variables=None):
    """Points meeting every bounded connected component of ``Zer(P)``.

    Without parameters this returns :class:`RealUnivariateRep` objects whose
    base is the empty encoding.  With parameters the critical locus is
    returned as parametrized representations valid for generic parameter
    values.
    """
    from .solve import sample_components, parametrized_sampling
    polys = list(P) if isinstance(P, (list, tuple)) else [MultiPoly.coerce(P)]
    if params:
        return parametrized_sampling(polys, tuple(params), variables)
    return sample_components(polys, variables)
