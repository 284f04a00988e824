"""
Curve segments along the first free coordinate.

For a bounded real algebraic set ``V = Zer(S)`` over a point ``t`` (free
coordinates ``x, y2, ..., yn``) the set is swept along ``x``.

* ``C`` is the polar curve ``S`` together with the maximal minors of the
  Jacobian of ``S`` with respect to ``y3, ..., yn``.  It meets every
  connected component of every fiber ``V_x``.
* ``C`` is parametrized by a univariate representation with separating
  element ``U = y2 + lam*y3 + ...``: ``g(t, x, U)`` and coordinates
  ``G_i / G_0``.
* Distinguished values are the ``x``-coordinates of the critical points of
  ``x`` on ``V``, the roots of the leading coefficient of ``g``, of the
  discriminant and of the resultants of ``g`` with its higher derivatives
  and with ``G_0``, and the ``x``-coordinates of the input points.
* Over every interval between distinguished values each real point of
  ``C`` at a rational sample gives a curve segment.  The endpoint a
  segment tends to is decided exactly: rational brackets separate the
  roots of ``g(c, U)``, and a rational parameter close enough to ``c`` is
  found for which no branch crosses a bracket.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .poly import MultiPoly, sort_vars
from .triangular import (EMPTY, TriangularThomEncoding, IdenticallyZero, _simplest_between,
                         triangular_sample_points, _dense)
from .univariate import _der_dense, _to_poly
from .solve import (gcd_at, solve, linear_substitutions, elimination_chain, param_rep,
                    same_point, dedupe_points, NotZeroDimensional, _minors)
from . import flintbridge as fb

__all__ = ["CurveSegment", "DistinguishedOutput", "NotSpecial", "UnboundedInput",
           "curve_segments", "eval_curve_segment", "polar_system", "critical_system",
           "distinguished_values"]

LAMBDAS = (1, 2, -1, 3, -2, 5, 7, -3)


class NotSpecial(ValueError):
    """The input does not have the expected dimension in these coordinates."""


class UnboundedInput(ValueError):
    pass


@dataclass(eq=False)
class CurveSegment:
    """A branch of a curve over an open interval of its parameter.

    ``g(t, X, U)`` with Thom condition ``tau`` picks the branch and the
    coordinates are ``G[i] / G[0]`` (``coords`` gives their names, the
    parameter coordinate equals ``X * G[0]``).  ``left``/``right`` encode
    the interval ends as extensions of ``base`` by the parameter.
    """
    base: TriangularThomEncoding
    param: str
    coords: tuple
    left: TriangularThomEncoding
    right: TriangularThomEncoding
    g: MultiPoly
    tau: tuple
    G: tuple
    u: str
    lam: int
    system: tuple
    sample: object
    sample_point: TriangularThomEncoding
    index: int = 0
    left_point: TriangularThomEncoding = None
    right_point: TriangularThomEncoding = None
    uexpr: MultiPoly = None

    @property
    def param_index(self):
        return self.coords.index(self.param)

    def approx_interval(self):
        return self.left.approx()[-1], self.right.approx()[-1]


@dataclass
class DistinguishedOutput:
    """Distinguished values with their points and the curves between them."""
    base: TriangularThomEncoding
    var: str
    coords: tuple
    values: list = field(default_factory=list)
    points: list = field(default_factory=list)
    curves: list = field(default_factory=list)
    adjacencies: list = field(default_factory=list)

    def all_points(self):
        return [p for ps in self.points for p in ps]

    def all_curves(self):
        return [c for cs in self.curves for c in cs]


def _jac(S, names):
    return [[p.diff(v) for v in names] for p in S]


def polar_system(S, free):
    """``S`` plus the maximal minors of its Jacobian in ``free[2:]``."""
    return list(S) + _minors(_jac(S, free[2:]), len(S))


def critical_system(S, free):
    """``S`` plus the maximal minors of its Jacobian in ``free[1:]`` (critical points of ``free[0]``)."""
    return list(S) + _minors(_jac(S, free[1:]), len(S))


def _prepare(P):
    polys = [MultiPoly.coerce(p) for p in (P if isinstance(P, (list, tuple)) else [P])]
    polys = [p for p in polys if not p.is_zero()]
    if len(polys) == 1 and not polys[0].has_eps():
        polys = [fb.squarefree(polys[0])]
    return polys


def _free_vars(polys, enc):
    vs = set()
    for p in polys:
        vs.update(v for v in p.vars if v not in enc.vars and v != "eps")
    return list(sort_vars(tuple(vs)))


def _cmp_value(a, b):
    """Order two extensions of the same base by their top coordinate."""
    base = a.parent if a.parent is not None else EMPTY
    fa, fb_ = a.approx()[-1], b.approx()[-1]
    if abs(fa - fb_) > 1e-8 * (1 + abs(fa)):
        return -1 if fa < fb_ else 1
    return base.compare_roots(a, b)


def _sorted_unique(base, nodes):
    from functools import cmp_to_key
    nodes = sorted(nodes, key=cmp_to_key(_cmp_value))
    out = []
    for n in nodes:
        if out and _cmp_value(out[-1], n) == 0:
            continue
        out.append(n)
    return out


def _rational_node(base, var, r):
    return base.extend(var, MultiPoly.var(var) - r, (1,))


def _value_of(point, var, base):
    """Extension of ``base`` by the ``var`` coordinate of a point tower."""
    idx = point.vars.index(var)
    if idx == len(base):
        return point.prefix(idx + 1)
    st = point.prefix(idx + 1)._numeric_state() if not point.has_eps else None
    if st is not None and st["exact"] is not None:
        return _rational_node(base, var, st["exact"])
    # fall back: the coordinate as a root of its own level projected by resultants
    lvl = point.prefix(idx + 1)
    poly = lvl.level
    for node in reversed(lvl.chain()[len(base):-1]):
        poly = fb.resultant(poly, node.level, node.var)
    for cand in base.roots(poly, var):
        if same_point(cand, point, [var] + list(base.vars)):
            return cand
    raise ValueError("could not project point")


def distinguished_values(enc, polys, var):
    """Sorted distinct real roots in ``var`` over ``enc`` of a family of polynomials."""
    nodes = []
    factors = []
    for p in polys:
        p = MultiPoly.coerce(p)
        if var not in p.vars:
            continue
        for f in fb.irreducible_factors(p):
            if var in f.vars and f not in factors:
                factors.append(f)
    for f in factors:
        try:
            nodes.extend(enc.roots(f, var))
        except IdenticallyZero:
            continue
    return _sorted_unique(enc, nodes)


def _U_expr(unknowns, lam, subs):
    """Separating element as a polynomial in the coordinates."""
    e = MultiPoly.var(unknowns[0])
    for i, o in enumerate(unknowns[1:], start=1):
        e = e + MultiPoly.constant(lam) ** i * MultiPoly.var(o)
    return e


class _RetryLambda(Exception):
    pass


def curve_segments(enc, P, U0=(), free=None):
    """Distinguished values, points and curve segments of ``Zer(P)`` over ``enc``.

    ``P`` is a polynomial or a list of polynomials; ``free`` lists the free
    coordinates with the sweeping coordinate first.  ``U0`` holds point
    towers (extensions of ``enc`` by all free coordinates) that must appear
    among the distinguished points.
    """
    S = _prepare(P)
    free = list(free) if free is not None else _free_vars(S, enc)
    if not free:
        raise ValueError("no free coordinate")
    last = None
    for lam in LAMBDAS:
        try:
            return _curve_segments(enc, S, list(U0), free, lam)
        except _RetryLambda as exc:
            last = exc
    raise NotSpecial("no separating element found: %s" % last)


def _curve_segments(enc, S, U0, free, lam):
    x = free[0]
    out = DistinguishedOutput(enc, x, tuple(free))
    if len(free) == 1:
        vals = _points_of(enc, S, x)
        for v in _merge_inputs(enc, vals, U0, x):
            out.values.append(v)
            out.points.append(dedupe_points([v] + [p for p in U0 if _over(p, v, x, enc)], free))
        return out
    C = polar_system(S, free)
    K = critical_system(S, free)
    Cred, subs, rem = linear_substitutions(C, free[1:])
    unknowns = [v for v in free[1:] if v in rem]
    u = "u_" + x
    if unknowns:
        rep = param_rep(Cred, unknowns, lam, u)
        if rep is None:
            raise _RetryLambda("degenerate elimination")
        g, Grep = rep
        if u not in g.vars:
            raise _RetryLambda("eliminant free of U")
        uexpr = _U_expr(unknowns, lam, subs)
        # coordinates in the order of free
        G0 = Grep[0]
        coordG = {o: Gi for o, Gi in zip(unknowns, Grep[1:])}
        coordG[x] = MultiPoly.var(x) * G0
        for v, e in subs.items():
            coordG[v] = _homogenize(e, coordG, G0, x)
        G = (G0,) + tuple(coordG[v] for v in free)
    else:
        g, G, uexpr = None, None, None
    crit = distinguished_values(enc, _critical_eliminants(K, free, enc), x)
    crit = [c for c in crit if _has_real_fiber(K, free[1:], c)]
    fam = []
    if g is not None:
        # the real roots of g(x, .) keep their number and order away from these
        gd = _dense(g, u)
        fam.append(gd[-1])
    else:
        fam.extend(p for p in Cred if set(p.vars) - set(enc.vars) - {"eps"} == {x})
    fam = [p for p in fam if not p.is_zero()]
    values = _sorted_unique(enc, crit + distinguished_values(enc, fam, x))
    if g is not None:
        disc = fb.resultant(g, g.diff(u), u)
        if not disc.is_zero():
            extra = [c for c in distinguished_values(enc, [disc], x) if _real_collision(c, g, u)]
            values = _sorted_unique(enc, values + extra)
    values = _merge_inputs(enc, values, U0, x)
    for c in values:
        try:
            pts = solve(C, free[1:], c)
        except NotZeroDimensional:
            raise NotSpecial("the polar curve has a positive dimensional fiber")
        pts = pts + [p for p in U0 if _over(p, c, x, enc) and all(p.is_zero(q) for q in S)]
        out.values.append(c)
        out.points.append(dedupe_points(pts, free))
    _check_ends(enc, C, free, values)
    if g is None:
        return out
    for i in range(len(values) - 1):
        lo, hi = values[i], values[i + 1]
        r = _between(enc, lo, hi)
        rnode = _rational_node(enc, x, r)
        pts = solve(C, free[1:], rnode)
        cs = []
        _, rbrackets = triangular_sample_points(rnode, [g], u)
        for p in pts:
            tau = tuple(p.sign(_to_poly(d, u).subs({u: uexpr})) for d in _der_dense(_dense(g, u)))
            idx = _bracket_index_expr(p, uexpr, rbrackets) - 1
            seg = CurveSegment(enc, x, tuple(free), lo, hi, g, tau, G, u, lam, tuple(C), r, p,
                               idx, uexpr=uexpr)
            cs.append(seg)
        cs.sort(key=lambda s: s.index)
        for seg in cs:
            seg.left_point = _adjacent(enc, seg, lo, out.points[i], side=-1)
            seg.right_point = _adjacent(enc, seg, hi, out.points[i + 1], side=1)
            out.adjacencies.append((seg, seg.left_point))
            out.adjacencies.append((seg, seg.right_point))
        out.curves.append(cs)
    return out


def _homogenize(expr, coordG, G0, x):
    """Numerator over ``G0`` of a polynomial expression in the coordinates.

    The parameter ``x`` and base variables are kept as they are; only the
    eliminated unknowns carry the denominator ``G0``.
    """
    unk = [v for v in expr.vars if v in coordG and v != x]
    d = max((sum(e for v, e in zip(expr.vars, m) if v in unk) for m in expr.terms), default=0)
    if d > 1:
        raise NotSpecial("nonlinear substitution in coordinates")
    acc = MultiPoly.constant(0)
    for m, c in expr.terms.items():
        term = MultiPoly.constant(c)
        deg = 0
        for v, e in zip(expr.vars, m):
            if e and v in unk:
                term = term * coordG[v] ** e
                deg += e
            elif e:
                term = term * MultiPoly.var(v) ** e
        acc = acc + term * G0 ** (1 - deg)
    return acc


def _critical_eliminants(K, free, enc):
    """Polynomials in ``free[0]`` (over enc) vanishing at the critical points."""
    Kred, subs, rem = linear_substitutions(K, free[1:])
    order = [free[0]] + [v for v in free[1:] if v in rem]
    if any(p.is_constant() for p in Kred):
        return []
    levels = elimination_chain(Kred, order)
    if levels is None:
        return []
    if not levels[0]:
        raise NotSpecial("critical locus of the sweep is not finite")
    return levels[0]


def _points_of(enc, S, x):
    from .solve import gcd_at
    g = gcd_at(enc, S, x)
    if g is None:
        raise NotSpecial("fiber is not finite")
    if len(g) <= 1:
        return []
    return enc.roots(_to_poly(g, x), x)


def _over(point, c, x, enc):
    v = _value_of(point, x, enc)
    return _cmp_value(v, c) == 0


def _has_real_fiber(K, free, c):
    try:
        return bool(solve(K, free, c))
    except NotZeroDimensional:
        return True


def _real_collision(c, g, u):
    """Whether ``g(c, U)`` has a real multiple root (or vanishes identically)."""
    d = gcd_at(c, [g, g.diff(u)], u)
    if d is None:
        return True
    if len(d) <= 1:
        return False
    try:
        return bool(c.roots(_to_poly(d, u), u))
    except IdenticallyZero:
        return True


def _merge_inputs(enc, values, U0, x):
    extra = [_value_of(p, x, enc) for p in U0]
    return _sorted_unique(enc, list(values) + extra)


def _between(enc, lo, hi):
    """Simplest rational strictly between two values (either may be None)."""
    lo_cmp = (lambda r: -lo.sign(MultiPoly.var(lo.var) - r)) if lo is not None else None
    hi_cmp = (lambda r: -hi.sign(MultiPoly.var(hi.var) - r)) if hi is not None else None
    lo_hint = lo.isolating_interval()[0] if lo is not None else None
    hi_hint = hi.isolating_interval()[1] if hi is not None else None
    return _simplest_between(lo_cmp, hi_cmp, lo_hint, hi_hint)


def _check_ends(enc, C, free, values):
    x = free[0]
    if values:
        probes = [_between(enc, None, values[0]), _between(enc, values[-1], None)]
    else:
        probes = [Fraction(0)]
    for r in probes:
        try:
            pts = solve(C, free[1:], _rational_node(enc, x, r))
        except NotZeroDimensional:
            raise UnboundedInput("unbounded input")
        if pts:
            raise UnboundedInput("unbounded input")


def _u_order(node, g, u):
    return triangular_sample_points(node, [g], u)[0]


def _thom(node, g, u):
    return tuple(node.sign(_to_poly(d, u)) for d in _der_dense(_dense(g, u)))


def _adjacent(enc, seg, c, points, side):
    """The point of the fiber over ``c`` that the branch tends to."""
    u, g, x = seg.u, seg.g, seg.param
    roots, brackets = triangular_sample_points(c, [g], u)
    # parameter close to c with no branch crossing a bracket
    limit = seg.sample
    crossings = []
    for b in brackets:
        gb = g.subs({u: b})
        if x not in gb.vars:
            continue
        try:
            crossings.extend(enc.roots(gb, x))
        except IdenticallyZero:
            raise NotSpecial("eliminant contains a horizontal line")
    cval = c
    best = None
    for n in crossings:
        s = _cmp_value(n, cval)
        if s == 0:
            continue
        if side < 0 and s > 0 and n.sign(MultiPoly.var(x) - limit) <= 0:
            if best is None or _cmp_value(n, best) < 0:
                best = n
        if side > 0 and s < 0 and n.sign(MultiPoly.var(x) - limit) >= 0:
            if best is None or _cmp_value(n, best) > 0:
                best = n
    if side < 0:
        r = limit if best is None else _between(enc, cval, best)
    else:
        r = limit if best is None else _between(enc, best, cval)
    order = _u_order(_rational_node(enc, x, r), g, u)
    if seg.index >= len(order):
        raise RuntimeError("branch count changed inside an interval")
    node = order[seg.index]
    l = _bracket_index(node, u, brackets)
    if l <= 0 or l > len(roots):
        raise UnboundedInput("unbounded input")
    hits = []
    for p in points:
        lp = _bracket_index_expr(p, seg.uexpr, brackets)
        if lp == l:
            hits.append(p)
    if len(hits) != 1:
        if len(hits) > 1 and not all(same_point(h, hits[0], seg.coords) for h in hits[1:]):
            raise _RetryLambda("separating element not injective on a fiber")
        if not hits:
            raise RuntimeError("limit point of a branch is missing from the fiber")
    return hits[0]


def _bracket_index(node, u, brackets):
    x = MultiPoly.var(u)
    for i, b in enumerate(brackets):
        if node.sign(x - b) < 0:
            return i
    return len(brackets)


def _bracket_index_expr(point, uexpr, brackets):
    for i, b in enumerate(brackets):
        if point.sign(uexpr - b) < 0:
            return i
    return len(brackets)


def eval_curve_segment(seg, x, prec=53):
    """Floating point of the branch at parameter value ``x`` (strictly inside the interval)."""
    x = Fraction(x)
    X = MultiPoly.var(seg.param)
    if seg.left.sign(X - x) >= 0 or seg.right.sign(X - x) <= 0:
        raise ValueError("parameter value outside the open interval")
    node = _rational_node(seg.base, seg.param, x)
    order = node.roots(seg.g, seg.u)
    n = order[seg.index]
    if n.sign(seg.G[0]) == 0:
        from .solve import point_values
        return point_values(eval_curve_point(seg, x), list(seg.coords))
    vals, exact = n.values(max(prec, 64))
    from .triangular import _approx_ratio
    return [_approx_ratio(Gi, seg.G[0], vals, exact) for Gi in seg.G[1:]]


def eval_curve_point(seg, x):
    """Exact point tower of the branch at a rational parameter value."""
    x = Fraction(x)
    node = _rational_node(seg.base, seg.param, x)
    pts = solve(list(seg.system), [v for v in seg.coords if v != seg.param], node)
    _, brackets = triangular_sample_points(node, [seg.g], seg.u)
    for p in pts:
        if _bracket_index_expr(p, seg.uexpr, brackets) - 1 == seg.index:
            return p
    raise RuntimeError("branch point not found")


def projection_critical_points(polys, coords=None):
    """Critical points of the first coordinate restricted to ``Zer(polys)``."""
    S = _prepare(polys)
    free = list(coords) if coords is not None else _free_vars(S, EMPTY)
    return dedupe_points(solve(critical_system(S, free), free), free)


def silhouette(polys, coords=None):
    """Critical curve of the projection to the first two coordinates and its sweep.

    Returns a dict with the curve equations, the distinguished values of the
    first coordinate, the points above them and the curve segments.
    """
    S = _prepare(polys)
    free = list(coords) if coords is not None else _free_vars(S, EMPTY)
    out = curve_segments(EMPTY, S, free=free)
    return {"curve": polar_system(S, free), "coords": free,
            "critical_values": out.values, "critical_points": out.all_points(),
            "segments": out.all_curves(), "output": out}
