"""
Limits of points and curves defined over R<eps> as eps goes to 0.

Points and curves are given by univariate representations whose
coefficients may involve ``eps``.  All decisions are exact: signs of
eps-polynomials are read off their lowest order nonzero coefficient and
signs at algebraic points go through Thom encodings.

The limit of a curve needs care when a coordinate moves infinitely fast
(an eps-curve parametrized by ``X1`` on ``(0, eps)`` can tend to a curve in
the hyperplane ``X1 = 0``).  A curve segment is well-parametrized when the
squared norm of its derivative with respect to its parameter is at most
``k``; ``reparametrize_curve`` cuts a segment into well-parametrized pieces
by choosing, on each piece, a coordinate whose tangent component dominates.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .poly import MultiPoly, ONE
from .triangular import (EMPTY, TriangularThomEncoding, RealUnivariateRep, IdenticallyZero,
                         triangular_sample_points, _dense)
from .univariate import _der_dense, _to_poly
from .curves import CurveSegment, _between, _thom, _rational_node
from .solve import param_rep
from . import flintbridge as fb

__all__ = ["WellParamCertificate", "UnboundedPoint", "limit_of_bounded_point",
           "is_well_parametrized", "reparametrize_curve", "limit_of_curve", "make_segment",
           "tangent_polys", "branch_point", "segment_end_point", "sample_between"]


class UnboundedPoint(ValueError):
    pass


@dataclass
class WellParamCertificate:
    """Per subinterval: the chosen coordinate index and the sign of its ``G_l`` at a sample.

    ``breakpoints`` are the interior points where some ``G_l`` may change
    sign on the branch; ``polys[l]`` is ``k*F_l^2 - sum_j F_j^2``.
    """
    breakpoints: list
    samples: list
    ells: list
    signs: list
    polys: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(s >= 0 for s in self.signs)


# eps bookkeeping ------------------------------------------------------------------

def _lowest(p):
    """``(order, part)`` with ``p = eps^order * (part + O(eps))``."""
    p = MultiPoly.coerce(p)
    if not p.has_eps():
        return 0, p
    for i, q in enumerate(p.eps_parts()):
        if not q.is_zero():
            return i, q
    return 0, p


def _lowest_tuple(G):
    orders = [_lowest(x)[0] for x in G if not MultiPoly.coerce(x).is_zero()]
    o = min(orders) if orders else 0
    out = []
    for x in G:
        x = MultiPoly.coerce(x)
        parts = x.eps_parts() if x.has_eps() else [x]
        out.append(parts[o] if o < len(parts) else MultiPoly.constant(0))
    return tuple(out)


def _cmp(base, a, b):
    return base.compare_roots(a, b)


def _joint(node, other, var=None):
    """``node`` extended by the top level of ``other`` (an extension of a common base)."""
    level, v = other.level, other.var
    if var is not None and var != v:
        level = level.rename({v: var})
        v = var
    return TriangularThomEncoding([level], [other.sign_vec], [v], _parent=node, _numeric=other._num)


def _is_eps_free(node):
    return not node.has_eps


# limits of points --------------------------------------------------------------------

def limit_of_bounded_point(enc, rep):
    """Limit of the point of ``R<eps>^k`` given by ``rep`` over the eps-free point ``enc``.

    Returns ``(enc, rep0)``: ``rep0`` is an eps-free representation of the limit.
    """
    base = rep.base if rep.base is not None and len(rep.base) else enc
    u = rep.var
    g = MultiPoly.coerce(rep.g)
    if not g.has_eps() and not any(MultiPoly.coerce(x).has_eps() for x in rep.G):
        return base, rep
    _, g0 = _lowest(g)
    if u not in g0.vars:
        raise UnboundedPoint("point unbounded over R")
    point = base.extend(u, g, tuple(rep.tau))
    roots, brackets = triangular_sample_points(base, [g0], u)
    l = _bracket(point, MultiPoly.var(u), brackets)
    if l == 0 or l == len(brackets):
        raise UnboundedPoint("point unbounded over R")
    v = roots[l - 1]
    G0 = _lowest_tuple(rep.G)
    if v.sign(G0[0]) != 0:
        return base, RealUnivariateRep(v.level, tuple(v.sign_vec), G0, base, u)
    # the denominator vanishes in the limit: bracket each coordinate separately
    k = len(rep.G) - 1
    names = ["y%d" % (i + 1) for i in range(k)]
    tower = base
    for i in range(k):
        Y = MultiPoly.var(names[i])
        h = fb.resultant(g, Y * rep.G[0] - rep.G[i + 1], u)
        _, h0 = _lowest(h)
        if names[i] not in h0.vars:
            raise UnboundedPoint("point unbounded over R")
        roots, brackets = triangular_sample_points(base, [h0], names[i])
        li = 0
        for b in brackets:
            if point.sign((rep.G[i + 1] - b * rep.G[0]) * rep.G[0]) > 0:
                li += 1
        if li == 0 or li == len(brackets):
            raise UnboundedPoint("point unbounded over R")
        node = roots[li - 1]
        tower = _joint(tower, node) if len(tower) > len(base) else node
    G = (ONE,) + tuple(MultiPoly.var(n) for n in names)
    return base, RealUnivariateRep(tower.level, tuple(tower.sign_vec), G,
                                   tower.parent if tower.parent is not None else EMPTY, tower.var)


def _bracket(node, expr, brackets):
    """Number of brackets below the value of ``expr`` at ``node``."""
    n = 0
    for b in brackets:
        if node.sign(expr - b) > 0:
            n += 1
    return n


# segments ----------------------------------------------------------------------------

def make_segment(base, param, coords, left, right, g, tau, G, u="u"):
    """CurveSegment from explicit data; interval ends may be rationals or eps-polynomials."""
    X = MultiPoly.var(param)

    def node(a):
        if isinstance(a, TriangularThomEncoding):
            return a
        return base.extend(param, X - MultiPoly.coerce(a), (1,))
    return CurveSegment(base, param, tuple(coords), node(left), node(right), MultiPoly.coerce(g),
                        tuple(tau), tuple(MultiPoly.coerce(x) for x in G), u, 1, None, None, None,
                        uexpr=None)


def branch_point(seg, xnode):
    """Extension of ``xnode`` (base plus parameter) by the branch value of ``U``."""
    hits = [n for n in xnode.roots(seg.g, seg.u) if _thom(n, seg.g, seg.u) == tuple(seg.tau)]
    if len(hits) != 1:
        raise ValueError("branch not found at parameter value")
    return hits[0]


def tangent_polys(seg):
    """Tangent components ``F_i`` of the branch (up to a common factor)."""
    g, G, X, U = seg.g, seg.G, seg.param, seg.u
    G0 = G[0]
    gU, gX = g.diff(U), g.diff(X)
    F = []
    for Gi in G[1:]:
        dX = Gi.diff(X) * G0 - Gi * G0.diff(X)
        dU = Gi.diff(U) * G0 - Gi * G0.diff(U)
        F.append(gU * dX - dU * gX)
    return F


def _wp_polys(seg):
    F = tangent_polys(seg)
    k = len(F)
    total = MultiPoly.constant(0)
    for f in F:
        total = total + f * f
    return [MultiPoly.constant(k) * f * f - total for f in F]


def _inside(base, node, lo, hi):
    return _cmp(base, node, lo) > 0 and _cmp(base, node, hi) < 0


def _sorted_nodes(base, nodes):
    from functools import cmp_to_key
    nodes = sorted(nodes, key=cmp_to_key(lambda a, b: _cmp(base, a, b)))
    out = []
    for n in nodes:
        if out and _cmp(base, out[-1], n) == 0:
            continue
        out.append(n)
    return out


def _interior_roots(base, polys, var, lo, hi):
    nodes = []
    for p in polys:
        p = MultiPoly.coerce(p)
        if p.is_zero() or var not in p.vars:
            continue
        p = fb.squarefree(fb.content_free(p, var))
        try:
            cand = base.roots(p, var)
        except IdenticallyZero:
            continue
        nodes.extend(n for n in cand if _inside(base, n, lo, hi))
    return _sorted_nodes(base, nodes)


def _linear_value(node):
    """Value of a degree one level as a polynomial over the base, or None."""
    d = _dense(node.level, node.var)
    if len(d) != 2 or not d[1].is_constant() or d[1].has_eps():
        return None
    return d[0] * MultiPoly.constant(Fraction(-1) / Fraction(d[1].constant_value()))


def _eps_power(j):
    from .arith import EpsScalar
    return EpsScalar([0] * j + [1])


def _eps_guess(node, e):
    """Float value of an eps-algebraic number (over the empty point) at a tiny eps."""
    import flint
    level = node.level
    if set(level.vars) - {node.var}:
        return None
    d = [Fraction(c.eps_at(e).constant_value()) if not c.is_zero() else Fraction(0)
         for c in _dense(level.eps_at(e), node.var)]
    old = flint.ctx.prec
    flint.ctx.prec = 400
    try:
        P = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in d])
        ders = []
        q = P
        for _ in range(len(d) - 2):
            q = q.derivative()
            ders.append(flint.arb_poly([flint.arb(flint.fmpq(int(c.p), int(c.q))) for c in q.coeffs()]))
        hits = []
        for r, _ in P.complex_roots():
            if not r.imag.contains(0):
                continue
            x = r.real
            sg = []
            for dp in ders:
                v = dp(x)
                sg.append(1 if v > 0 else (-1 if v < 0 else 0))
            if tuple(sg) == tuple(node.sign_vec[1:]):
                hits.append(float(x.mid()))
        return hits[0] if len(hits) == 1 else None
    finally:
        flint.ctx.prec = old


def _guess_between(base, lo, hi, var):
    """Try ``r * eps^j`` with ``r`` guessed from the values at a tiny eps; checked exactly."""
    import math
    if len(base):
        return None
    e = Fraction(1, 2 ** 60)
    a, b = _eps_guess(lo, e), _eps_guess(hi, e)
    if a is None or b is None or not a < b:
        return None
    X = MultiPoly.var(var)
    mid = (a + b) / 2
    j0 = 0 if mid == 0 else max(0, int(math.floor(math.log(abs(mid)) / math.log(float(e)) + 1e-9)))
    for j in (j0, j0 + 1, j0 - 1):
        if j < 0:
            continue
        scale = float(e) ** j
        r = _between_floats(a / scale, b / scale)
        if r is None:
            continue
        m = MultiPoly.from_dict({(): _eps_power(j) * r}, ())
        cand = base.extend(var, X - m, (1,))
        if _inside(base, cand, lo, hi):
            return cand
    return None


def _between_floats(a, b):
    from fractions import Fraction as F
    if not a < b:
        return None
    for den in (1, 2, 4, 8, 16, 32, 64, 128, 256, 1024, 4096):
        import math
        n = math.floor(a * den) + 1
        if n / den < b:
            return F(n, den)
    return None


def sample_between(base, lo, hi, var):
    """Extension of ``base`` by a value strictly between two extensions ``lo < hi``."""
    if not base.has_eps and not lo.has_eps and not hi.has_eps:
        return _rational_node(base, var, _between(base, lo, hi))
    a, b = _linear_value(lo), _linear_value(hi)
    X = MultiPoly.var(var)
    if a is not None and b is not None:
        return base.extend(var, X - (MultiPoly.coerce(a) + MultiPoly.coerce(b)) * Fraction(1, 2), (1,))
    if a is not None or b is not None:
        # step off the linear end by r*eps^j, largest steps first
        for j in range(0, 7):
            for i in range(0, 12):
                step = MultiPoly.from_dict({(): _eps_power(j) * Fraction(1, 2 ** i)}, ())
                m = (MultiPoly.coerce(a) + step) if a is not None else (MultiPoly.coerce(b) - step)
                cand = base.extend(var, X - m, (1,))
                other = hi if a is not None else lo
                c = _cmp(base, cand, other)
                if (a is not None and c < 0) or (b is not None and c > 0):
                    return cand
    cand = _guess_between(base, lo, hi, var)
    if cand is not None:
        return cand
    # the midpoint is a root of Res_y(A(y), B(2X - y))
    A = lo.level.rename({lo.var: "y_mid"})
    B = hi.level.subs({hi.var: MultiPoly.constant(2) * X - MultiPoly.var("y_mid")})
    h = fb.resultant(A, B, "y_mid")
    for n in base.roots(fb.squarefree(h), var):
        if _inside(base, n, lo, hi):
            return n
    raise RuntimeError("no sample found between two values")


def _subintervals(seg, polys):
    base, X = seg.base, seg.param
    lo, hi = seg.left, seg.right
    cuts = []
    for P in polys:
        if seg.u in P.vars:
            r = fb.resultant(seg.g, P, seg.u)
        else:
            r = P
        cuts.append(r)
    bps = _interior_roots(base, cuts, X, lo, hi)
    ends = [lo] + bps + [hi]
    samples = [sample_between(base, a, b, X) for a, b in zip(ends, ends[1:])]
    return bps, samples


def is_well_parametrized(seg, samples=None):
    """Whether the derivative bound holds on the whole open interval.

    Returns ``(flag, certificate)``.  The sign of ``G_p`` (``p`` the
    parameter coordinate) is constant between consecutive breakpoints and
    is evaluated exactly at one sample per piece; extra ``samples``
    (parameter values) are checked as well.
    """
    polys = _wp_polys(seg)
    p = seg.param_index
    Gp = polys[p]
    bps, nodes = _subintervals(seg, [Gp])
    X = MultiPoly.var(seg.param)
    for s in samples or ():
        s = MultiPoly.coerce(s)
        nodes.append(seg.base.extend(seg.param, X - s, (1,)))
    signs = [branch_point(seg, n).sign(Gp) for n in nodes]
    cert = WellParamCertificate(bps, nodes, [p] * len(nodes), signs, {p: Gp})
    return cert.ok, cert


# reparametrization -------------------------------------------------------------------

def reparametrize_curve(enc, seg):
    """Cut a segment into well-parametrized pieces.

    Returns ``(points, segments)``: points are RealUnivariateReps of the
    branch at the cuts and segments are CurveSegments parametrized by the
    chosen coordinates, in the order of the original parameter.
    """
    polys = _wp_polys(seg)
    bps, samples = _subintervals(seg, polys)
    ells = []
    for s in samples:
        pt = branch_point(seg, s)
        sg = [pt.sign(P) for P in polys]
        ell = next(i for i, x in enumerate(sg) if x >= 0)
        ells.append(ell)
    # merge neighbouring pieces that keep the same coordinate
    ends = [seg.left] + bps + [seg.right]
    pieces = []
    for j, ell in enumerate(ells):
        if pieces and pieces[-1][2] == ell:
            pieces[-1][1] = ends[j + 1]
            continue
        pieces.append([ends[j], ends[j + 1], ell])
    points = []
    for lo, _, _ in pieces[1:]:
        points.append(RealUnivariateRep(seg.g, tuple(seg.tau), seg.G, lo, seg.u))
    out = []
    for lo, hi, ell in pieces:
        if ell == seg.param_index:
            out.append(replace(seg, left=lo, right=hi))
        else:
            out.append(_reparametrize_piece(seg, lo, hi, ell))
    return points, out


def _coord_value(seg, pnode, i):
    """Coordinate ``i`` of a branch point as an extension of the base point."""
    base = seg.base
    name = seg.coords[i]
    xnode = pnode.parent
    if i == seg.param_index:
        return xnode
    Y = MultiPoly.var(name)
    h = fb.resultant(seg.g, Y * seg.G[0] - seg.G[i + 1], seg.u)
    h = fb.resultant(h, xnode.level, seg.param) if seg.param in h.vars else h
    for cand in base.roots(fb.squarefree(h), name):
        if _joint(pnode, cand).sign(Y * seg.G[0] - seg.G[i + 1]) == 0:
            return cand
    raise RuntimeError("coordinate value not found")


def _end_value(seg, end, inner, i, side):
    """Limit of coordinate ``i`` of the branch at ``end`` (side -1: left end)."""
    base, X = seg.base, seg.param
    name = seg.coords[i]
    if i == seg.param_index:
        return end
    Y = MultiPoly.var(name)
    h = fb.squarefree(fb.resultant(seg.g, Y * seg.G[0] - seg.G[i + 1], seg.u))
    hx = fb.resultant(h, end.level, X) if X in h.vars else h
    cands = base.roots(fb.squarefree(hx), name) if name in hx.vars else []
    if not cands:
        raise RuntimeError("branch end not found")
    # move the inner parameter towards the end until no candidate value is crossed
    s = inner
    while True:
        crossing = None
        for c in cands:
            try:
                joint_roots = c.roots(h, X) if X in h.vars else []
            except IdenticallyZero:
                joint_roots = []
            for r in joint_roots:
                # r extends c; compare its parameter with end and s through a joint tower
                if _between_in(r, end, s, X, side):
                    crossing = (r, c)
                    break
            if crossing:
                break
        if crossing is None:
            break
        r = crossing[0]
        rb = _project_param(base, r, X)
        s = sample_between(base, end, rb, X) if side < 0 else sample_between(base, rb, end, X)
    pt = branch_point(seg, s)
    val = _coord_value(seg, pt, i)
    if pt.sign(tangent_polys(seg)[i]) == 0:
        same = [c for c in cands if _cmp(base, c, val) == 0]
        if same:
            return same[0]
    below = [c for c in cands if _cmp(base, c, val) < 0]
    above = [c for c in cands if _cmp(base, c, val) > 0]
    inc = branch_point(seg, s).sign(tangent_polys(seg)[i] * _tangent_orientation(seg)) > 0
    # moving towards the left end reverses the direction of travel
    towards_lower = inc if side < 0 else not inc
    pool = below if towards_lower else above
    if not pool:
        raise UnboundedPoint("curve unbounded over R")
    return pool[-1] if towards_lower else pool[0]


def _tangent_orientation(seg):
    """Sign factor turning ``F_i`` into the sign of d(coordinate i)/d(parameter)."""
    return MultiPoly.coerce(tangent_polys(seg)[seg.param_index])


def _between_in(r, end, s, X, side):
    """Whether the parameter at tower ``r`` lies in the half open range between ``end`` and ``s``."""
    Xv = MultiPoly.var(X)
    je = _joint(r, end, X + "_e")
    a = je.sign(Xv - MultiPoly.var(X + "_e"))
    js = _joint(r, s, X + "_s")
    b = js.sign(Xv - MultiPoly.var(X + "_s"))
    if side < 0:
        return a > 0 and b <= 0
    return a < 0 and b >= 0


def _project_param(base, r, X):
    """The parameter coordinate of tower ``r`` (base, Y, X) as an extension of ``base``."""
    c = r.parent
    h = fb.resultant(r.level, c.level, c.var) if c.var in r.level.vars else r.level
    Xv = MultiPoly.var(X)
    for cand in base.roots(fb.squarefree(h), X):
        if _joint(r, cand, X + "_p").sign(Xv - MultiPoly.var(X + "_p")) == 0:
            return cand
    raise RuntimeError("projection failed")


def _reparametrize_piece(seg, lo, hi, ell):
    """The branch over ``(lo, hi)`` parametrized by coordinate ``ell``."""
    base, X, U = seg.base, seg.param, seg.u
    name = seg.coords[ell]
    s_mid = sample_between(base, lo, hi, X)
    a = _end_value(seg, lo, s_mid, ell, -1)
    b = _end_value(seg, hi, s_mid, ell, 1)
    if _cmp(base, a, b) > 0:
        a, b = b, a
    Y = MultiPoly.var(name)
    system = [seg.g, Y * seg.G[0] - seg.G[ell + 1]]
    u2 = "u_" + name
    for lam in (1, 2, -1, 3, -2):
        rep = param_rep(system, [X, U], lam, u2)
        if rep is None:
            continue
        g2, (D, NX, NU) = rep
        if u2 not in g2.vars:
            continue
        G2 = _compose(seg.G, X, U, NX, NU, D)
        G2 = G2[:ell + 1] + (Y * G2[0],) + G2[ell + 2:]
        if G2[0].is_zero():
            continue
        s2 = sample_between(base, a, b, name)
        # the branch point over s2: the parameter value lies in (lo, hi)
        pt = _point_at_coord(seg, lo, hi, ell, s2)
        if pt is None:
            continue
        uexpr = MultiPoly.var(X) + MultiPoly.constant(lam) * MultiPoly.var(U)
        tau2 = _thom_at(pt, g2, u2, uexpr, name, s2)
        if tau2 is None:
            continue
        new = CurveSegment(base, name, seg.coords, a, b, g2, tau2, G2, u2, lam, None, None, None)
        return new
    raise RuntimeError("reparametrization failed")


def _compose(G, X, U, NX, NU, D):
    """Numerators of ``G_i(NX/D, NU/D)`` over a common power of ``D``."""
    deg = 0
    for Gi in G:
        for m in Gi.terms:
            e = 0
            for v, k in zip(Gi.vars, m):
                if v in (X, U):
                    e += k
            deg = max(deg, e)
    out = []
    for Gi in G:
        acc = MultiPoly.constant(0)
        for m, c in Gi.terms.items():
            term = MultiPoly.from_dict({(): c}, ())
            e = 0
            for v, k in zip(Gi.vars, m):
                if not k:
                    continue
                if v == X:
                    term = term * NX ** k
                    e += k
                elif v == U:
                    term = term * NU ** k
                    e += k
                else:
                    term = term * MultiPoly.var(v) ** k
            acc = acc + term * D ** (deg - e)
        out.append(acc)
    return tuple(out)


def _point_at_coord(seg, lo, hi, ell, ynode):
    """Branch point (tower base, X, U) whose coordinate ``ell`` equals ``ynode``."""
    base, X, U = seg.base, seg.param, seg.u
    name = seg.coords[ell]
    Y = MultiPoly.var(name)
    h = fb.resultant(seg.g, Y * seg.G[0] - seg.G[ell + 1], U)
    hy = fb.resultant(h, ynode.level, name) if name in h.vars else h
    for xn in base.roots(fb.squarefree(hy), X):
        if not _inside(base, xn, lo, hi):
            continue
        try:
            pt = branch_point(seg, xn)
        except ValueError:
            continue
        if _joint(pt, ynode).sign(Y * seg.G[0] - seg.G[ell + 1]) == 0:
            return pt
    return None


def _thom_at(pt, g2, u2, uexpr, name, ynode):
    j = _joint(pt, ynode)
    ders = _der_dense(_dense(g2, u2))
    return tuple(j.sign(_to_poly(d, u2).subs({u2: uexpr})) for d in ders)


# limits of curves --------------------------------------------------------------------

def limit_of_curve(enc, seg):
    """Limit of an eps-curve segment over the eps-free point ``enc``.

    Returns ``(enc, points, segments)``: eps-free points (RealUnivariateReps)
    and CurveSegments whose union is the limit of the image.
    """
    eps_data = seg.g.has_eps() or seg.left.has_eps or seg.right.has_eps or \
        any(x.has_eps() for x in seg.G)
    if not eps_data:
        return enc, [], [seg]
    _, pieces = reparametrize_curve(enc, seg)
    points, segments = [], []
    for w in pieces:
        pts, segs = _limit_of_piece(enc, w)
        if segments and segs:
            points.append(segment_end_point(segments[-1], 1))
        points.extend(pts)
        segments.extend(segs)
    return enc, points, segments


def segment_end_point(seg, side):
    """Point where an eps-free segment ends (side -1: left end), as a RealUnivariateRep."""
    from .solve import point_to_rep
    base = seg.base
    end = seg.left if side < 0 else seg.right
    inner = sample_between(base, seg.left, seg.right, seg.param)
    tower = None
    for i, name in enumerate(seg.coords):
        node = _end_value(seg, end, inner, i, side)
        if node.var != name:
            node = TriangularThomEncoding([node.level.rename({node.var: name})], [node.sign_vec], [name],
                                          _parent=node.parent, _numeric=node._num)
        tower = node if tower is None else _joint(tower, node)
    return point_to_rep(tower, list(seg.coords))


def _limit_value(base, node):
    """Limit of an eps-algebraic value (extension of ``base``)."""
    if not node.has_eps:
        return node
    X = node.var
    rep = RealUnivariateRep(node.level, tuple(node.sign_vec), (ONE, MultiPoly.var(X)), base, X)
    _, r = limit_of_bounded_point(base, rep)
    return base.extend(X, r.g, tuple(r.tau))


def _limit_at(w, s):
    rep = RealUnivariateRep(w.g, tuple(w.tau), w.G, s, w.u)
    r = limit_of_bounded_point(s, rep)[1]
    return r.base.extend(r.var, r.g, tuple(r.tau)), r


def _limit_rep(w, direct):
    """Eps-free ``(g, G, u, uexpr)`` for the limit of the branch of ``w``.

    When the lowest order part of the denominator survives, the lowest
    order parts of ``g`` and ``G`` are used.  Otherwise each coordinate is
    eliminated separately and the limit system of these eliminants is
    parametrized again; ``uexpr`` then gives the new separating element in
    terms of the coordinates ``y1, y2, ...`` of the limit tower.
    """
    X, u = w.param, w.u
    if direct:
        return fb.squarefree(_lowest(w.g)[1]), _lowest_tuple(w.G), u, MultiPoly.var(u)
    unknowns = [c for c in w.coords if c != X]
    system = []
    for i, name in enumerate(w.coords):
        if name == X:
            continue
        Y = MultiPoly.var(name)
        h = fb.content_free(fb.resultant(w.g, Y * w.G[0] - w.G[i + 1], u), name)
        system.append(fb.squarefree(_lowest(h)[1]))
    u2 = "u_lim"
    for lam in (1, 2, -1, 3, -2, 5):
        rep = param_rep(system, unknowns, lam, u2)
        if rep is None or u2 not in rep[0].vars:
            continue
        g2, (D, *N) = rep
        nums = dict(zip(unknowns, N))
        G2 = (D,) + tuple(MultiPoly.var(X) * D if c == X else nums[c] for c in w.coords)
        uexpr = MultiPoly.constant(0)
        for j, c in enumerate(unknowns):
            uexpr = uexpr + MultiPoly.constant(lam) ** j * MultiPoly.var("y%d" % (w.coords.index(c) + 1))
        return g2, G2, u2, uexpr
    raise RuntimeError("limit curve could not be parametrized")


def _limit_of_piece(enc, w):
    base, X = w.base, w.param
    a0 = _limit_value(base, w.left)
    b0 = _limit_value(base, w.right)
    if _cmp(base, a0, b0) == 0:
        return [], []
    s0 = sample_between(base, a0, b0, X)
    direct = _limit_at(w, s0)[1].var == w.u
    g0, G0, u, uexpr = _limit_rep(w, direct)
    gd = _dense(g0, u)
    fam = [gd[-1]]
    for d in _der_dense(gd):
        fam.append(fb.resultant(g0, _to_poly(d, u), u))
    if not G0[0].is_constant():
        fam.append(fb.resultant(g0, G0[0], u))
    cuts = _interior_roots(base, [f for f in fam if not f.is_zero()], X, a0, b0)
    ends = [a0] + cuts + [b0]
    segs, points = [], []
    ders = [_to_poly(d, u).subs({u: uexpr}) for d in _der_dense(gd)]
    for lo, hi in zip(ends, ends[1:]):
        s = sample_between(base, lo, hi, X)
        node, _ = _limit_at(w, s)
        tau = tuple(node.sign(d) for d in ders)
        segs.append(CurveSegment(base, X, w.coords, lo, hi, g0, tau, G0, u, w.lam, None, None, None))
    for c in cuts:
        points.append(_limit_at(w, c)[1])
    return points, segs
