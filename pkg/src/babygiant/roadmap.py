"""
Roadmaps of real algebraic sets.

A roadmap of ``Z = Zer(S)`` is a union of curves contained in ``Z`` that
meets every connected component of ``Z`` and whose intersection with each
component is connected.  It is returned as a graph: vertices are exact
point towers, edges are curve segments between two vertices.

The construction sweeps the first coordinate.  ``roadmap_lowspecial`` takes
the polar curve of the sweep and recurses into the fibers over the
distinguished values.  ``roadmap_bounded`` does baby steps and giant steps
with block size ``p``: the roadmap of the ``p``-dimensional polar variety
``W`` (critical locus of the projection to the first ``p + 1`` coordinates)
is computed first, then the fibers of ``Z`` over the projections to the
first ``p`` coordinates of its vertices are treated recursively, so the
number of free coordinates drops by ``p`` at every giant step.

Unbounded sets are intersected with a large sphere in one more variable
(``roadmap_general``); the outside of the ball is covered by rays.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math
import os
import time

from .poly import MultiPoly, sort_vars
from .triangular import EMPTY, TriangularThomEncoding
from .curves import (curve_segments, eval_curve_segment, NotSpecial, UnboundedInput, _value_of,
                     _cmp_value, _jac)
from .solve import (solve, same_point, point_values, NotZeroDimensional, _minors,
                    dedupe_points)
from . import flintbridge as fb

__all__ = ["BudgetExceeded", "UseGeneral", "RoadmapPieces", "RoadmapGraph", "Vertex", "Edge",
           "build_deformation", "roadmap_lowspecial", "roadmap_limit_lowgeneral",
           "roadmap_bounded", "roadmap_general", "assemble_graph", "default_block_size",
           "normalize_system", "certified_bounded", "roadmap"]


class BudgetExceeded(RuntimeError):
    pass


class UseGeneral(ValueError):
    """Raised by the bounded pipeline on unbounded input."""


class _Budget:
    def __init__(self, seconds=None):
        if seconds is None:
            env = os.environ.get("ROADMAP_TIME_BUDGET_SECS")
            seconds = float(env) if env else None
        self.deadline = None if seconds is None else time.monotonic() + seconds

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exceeded")


@dataclass
class _Stats:
    depth: int = 0
    max_depth: int = 0
    curve_calls: int = 0
    budget: _Budget = None

    def enter(self):
        self.depth += 1
        self.max_depth = max(self.max_depth, self.depth)

    def leave(self):
        self.depth -= 1

    def check(self):
        if self.budget is not None:
            self.budget.check()


def default_block_size(k):
    return max(1, int(round(math.sqrt(k))))


# input normalisation ----------------------------------------------------------------

def normalize_system(polys):
    """Drop zero polynomials, replace a single polynomial by its squarefree part."""
    polys = [MultiPoly.coerce(p) for p in polys]
    polys = [p for p in polys if not p.is_zero()]
    if len(polys) == 1 and not polys[0].is_constant():
        return [fb.squarefree(polys[0])]
    return polys


def _top_form(P):
    d = P.total_degree()
    terms = {m: c for m, c in P.terms.items() if sum(m) == d}
    return MultiPoly.from_dict(terms, P.vars), d


def certified_bounded(polys, coords):
    """True when some polynomial has a definite top degree form (so the zero set is bounded)."""
    for P in polys:
        P = MultiPoly.coerce(P)
        if P.is_constant():
            return True
        if set(coords) - set(P.vars):
            continue
        H, d = _top_form(P)
        if d % 2:
            continue
        r2 = MultiPoly.constant(0)
        for v in coords:
            r2 = r2 + MultiPoly.var(v) ** 2
        c = H.terms.get(tuple([d] + [0] * (len(H.vars) - 1))) if H.vars else None
        if c is not None and H == MultiPoly.constant(c) * r2 ** (d // 2):
            return True
        if len(coords) == 1:
            return True
        if len(coords) == 2:
            a, b = coords
            h1 = H.subs({a: MultiPoly.constant(1)})
            lead = H.subs({a: MultiPoly.constant(0), b: MultiPoly.constant(1)})
            if lead.is_zero() or h1.degree(b) != d:
                continue
            if not EMPTY.roots(h1, b):
                return True
    return False


# deformation (kept for the interface; the direct pipeline does not need it) ----------

def build_deformation(Q, p, dbar=None, k=None):
    """``Def(Q, eps) = -eps*G_k(dbar) + Q`` and its critical system for block ``p``.

    ``G_k(dbar) = X1^d1 + ... + Xk^dk + X2^2 + ... + X_{k+1}^2 + 2k``.
    """
    Q = MultiPoly.coerce(Q)
    if k is None:
        names = [v for v in Q.vars if v.startswith("x")]
        k = max((int(v[1:]) for v in names), default=0)
    deg = Q.total_degree()
    if dbar is None:
        e = deg + 1
        dbar = [e + (e % 2)] * k
    dbar = list(dbar)
    if len(dbar) != k:
        raise ValueError("need one degree per variable")
    for d in dbar:
        if d % 2 or d <= deg:
            raise ValueError("degrees must be even and larger than the degree of Q")
    X = [MultiPoly.var("x%d" % i) for i in range(1, k + 2)]
    G = MultiPoly.constant(2 * k)
    for i in range(k):
        G = G + X[i] ** dbar[i]
    for i in range(1, k + 1):
        G = G + X[i] ** 2
    eps = MultiPoly.coerce(_eps())
    D = Q - eps * G
    crit = [D] + [D.diff("x%d" % i) for i in range(p + 2, k + 2)]
    return D, crit


def _eps():
    from .arith import EPS
    return MultiPoly.from_dict({(): EPS}, ())


# pieces -------------------------------------------------------------------------------

@dataclass
class RoadmapPieces:
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def extend(self, other):
        self.vertices.extend(other.vertices)
        self.edges.extend(other.edges)


def _coordinate_node(point, over, name):
    """Extension of ``over`` by the ``name`` coordinate of ``point`` (same underlying values)."""
    idx = point.vars.index(name)
    lvl = point.prefix(idx + 1)
    st = lvl._numeric_state() if not lvl.has_eps else None
    if st is not None and st["exact"] is not None:
        return over.extend(name, MultiPoly.var(name) - st["exact"], (1,))
    poly = lvl.level
    for node in reversed(lvl.chain()[:-1]):
        if node.var in poly.vars and node.var not in over.vars:
            poly = fb.resultant(poly, node.level, node.var)
    poly = fb.squarefree(fb.content_free(poly, name))
    target = point_values(point, [name])[0]
    cands = over.roots(poly, name)
    cands.sort(key=lambda n: abs(n.approx()[-1] - target))
    tmp = name + "_c"
    for n in cands:
        joint = TriangularThomEncoding([n.level.rename({name: tmp})], [n.sign_vec], [tmp],
                                       _parent=point, _numeric=n._num)
        if joint.is_zero(MultiPoly.var(name) - MultiPoly.var(tmp)):
            return n
    raise RuntimeError("could not project point")


def _project(point, base, names):
    node = base
    for n in names:
        node = _coordinate_node(point, node, n)
    return node


def _same_base_values(point, base):
    """Whether the coordinates of ``base`` agree with those of ``point``."""
    names = [v for v in base.vars]
    vals_b = base.approx()
    vals_p = point_values(point, names)
    if any(abs(a - b) > 1e-6 * (1 + abs(a)) for a, b in zip(vals_b, vals_p)):
        return False
    joint = point
    ren = {v: v + "_q" for v in base.vars}
    for node in base.chain():
        joint = TriangularThomEncoding([node.level.rename(ren)], [node.sign_vec], [ren[node.var]],
                                       _parent=joint, _numeric=node._num)
    return all(joint.is_zero(MultiPoly.var(v) - MultiPoly.var(ren[v])) for v in names)


# low dimensional roadmap --------------------------------------------------------------

def roadmap_lowspecial(S, base=EMPTY, free=None, points=(), dim=None, stats=None):
    """Roadmap of ``Zer(S)`` over ``base`` by sweeping ``free`` in order.

    Fibers over every distinguished value are treated recursively until
    they are finite.  ``points`` must lie on the set (their coordinates
    also become distinguished values).
    """
    S = normalize_system(S)
    stats = stats or _Stats()
    free = list(free) if free is not None else _free(S, base)
    if dim is None:
        dim = len(free) - len(S)
    out = RoadmapPieces()
    if dim < 0 or not free:
        return out
    stats.check()
    stats.curve_calls += 1
    res = curve_segments(base, S, list(points), free)
    for pts in res.points:
        out.vertices.extend(pts)
    for seg in res.all_curves():
        out.edges.append((seg, seg.left_point, seg.right_point))
    if dim <= 1 or len(free) <= 2:
        return out
    for c, pts in zip(res.values, res.points):
        extra = [q for q in points if _over_value(q, c, free[0], base)]
        if not pts and not extra:
            continue
        sub = roadmap_lowspecial(S, c, free[1:], _dedupe(pts + extra, free), dim - 1, stats)
        out.extend(sub)
    return out


def _over_value(point, c, var, base):
    return _cmp_value(_value_of(point, var, base), c) == 0


def _dedupe(points, names):
    out = []
    for p in points:
        if not any(same_point(p, q, names) for q in out):
            out.append(p)
    return out


def _free(S, base):
    vs = set()
    for p in S:
        vs.update(v for v in MultiPoly.coerce(p).vars if v not in base.vars and v != "eps")
    return list(sort_vars(tuple(vs)))


def polar_variety(S, free, p):
    """``S`` with the maximal minors of its Jacobian in the coordinates after ``free[p]``."""
    S = list(S)
    return S + _minors(_jac(S, free[p + 1:]), len(S))


def roadmap_limit_lowgeneral(S, p, base=EMPTY, free=None, points=(), stats=None):
    """Roadmap of the ``p``-dimensional polar variety of ``Zer(S)`` through ``points``.

    The critical locus is taken directly on the squarefree input, which
    plays the role of the limit of the deformed critical locus.
    """
    S = normalize_system(S)
    free = list(free) if free is not None else _free(S, base)
    W = polar_variety(S, free, p)
    return roadmap_lowspecial(W, base, free, points, dim=min(p, len(free) - len(S)), stats=stats)


# baby-giant ---------------------------------------------------------------------------

def roadmap_bounded(S, p=None, base=EMPTY, free=None, points=(), stats=None, dim=None):
    """Roadmap of the bounded set ``Zer(S)`` over ``base`` with block size ``p``."""
    S = normalize_system(S)
    stats = stats or _Stats()
    free = list(free) if free is not None else _free(S, base)
    if p is None:
        p = default_block_size(len(free))
    if dim is None:
        dim = len(free) - len(S)
    stats.enter()
    try:
        if dim < 0 or not free:
            return RoadmapPieces()
        if len(free) <= p or dim <= 0:
            try:
                return roadmap_lowspecial(S, base, free, points, dim, stats)
            except UnboundedInput:
                raise UseGeneral("use roadmap_general")
        # baby steps: roadmap of the polar variety through the inputs' values
        try:
            R = roadmap_limit_lowgeneral(S, p, base, free, _value_hints(points, base, free, p), stats)
        except UnboundedInput:
            raise UseGeneral("use roadmap_general")
        out = RoadmapPieces()
        out.extend(R)
        # giant steps over the projections of the vertices and the inputs
        zs = []
        for q in list(R.vertices) + list(points):
            stats.check()
            z = _project(q, base, free[:p])
            if not any(_same_tower(z, w) for w in zs):
                zs.append(z)
        for z in zs:
            over = [q for q in list(R.vertices) + list(points) if _same_base_values(q, z)]
            fiber_points = _dedupe([_project(q, z, free[p:]) for q in over], free[p:] + list(z.vars))
            sub = roadmap_bounded(S, p, z, free[p:], fiber_points, stats, dim - p)
            out.extend(sub)
        return out
    finally:
        stats.leave()


def _value_hints(points, base, free, p):
    """Inputs are passed to the baby steps only through their coordinates."""
    return [q for q in points]


def _same_tower(a, b):
    names = list(a.vars)
    if list(b.vars) != names:
        return False
    return same_point(a, b, names)


# general (possibly unbounded) sets ----------------------------------------------------

CENTERS = ((0, 0), (Fraction(1, 3), Fraction(1, 5)), (Fraction(2, 7), Fraction(-3, 11)))


def _center(k, attempt):
    if attempt == 0:
        return [Fraction(0)] * k
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    return [Fraction((-1) ** i * (i + attempt), primes[(i + attempt) % len(primes)]) for i in range(k)]


def _distance_critical_values(S, coords, center):
    r2 = MultiPoly.constant(0)
    for v, c in zip(coords, center):
        r2 = r2 + (MultiPoly.var(v) - c) ** 2
    M = _jac(S, coords) + [[(MultiPoly.var(v) - c) for v, c in zip(coords, center)]]
    crit = list(S) + _minors(M, len(S) + 1)
    pts = solve(crit, coords)
    vals = []
    for q in pts:
        xs = point_values(q, coords)
        vals.append(sum((x - float(c)) ** 2 for x, c in zip(xs, center)))
    return vals, r2


def roadmap_general(polys, points=(), p=None, coords=None, stats=None):
    """Roadmap of ``Zer(polys)`` in ``R^k``; returns ``(pieces, info)``.

    When boundedness is certified the bounded pipeline runs directly.
    Otherwise the set is cut by ``|x - c|^2 + x_{k+1}^2 = R^2`` with ``R^2``
    above every critical value of the distance to ``c``; the roadmap of
    that bounded set is projected back and rays leave the ball at the
    boundary points.
    """
    S = normalize_system(polys)
    coords = list(coords) if coords is not None else _free(S, EMPTY)
    k = len(coords)
    stats = stats or _Stats()
    info = {"mode": "bounded", "rays": [], "coords": coords}
    if any(P.is_constant() for P in S):
        return RoadmapPieces(), info
    if not S:
        raise ValueError("the zero polynomial defines the whole space")
    if certified_bounded(S, coords):
        pieces = roadmap_bounded(S, p or default_block_size(k), EMPTY, coords, points, stats)
        return pieces, info
    for attempt in range(6):
        center = _center(k, attempt)
        try:
            vals, r2 = _distance_critical_values(S, coords, center)
        except NotZeroDimensional:
            continue
        break
    else:
        raise NotSpecial("no center with finitely many critical points of the distance")
    for q in points:
        xs = point_values(q, coords)
        vals.append(sum((x - float(c)) ** 2 for x, c in zip(xs, center)))
    R2 = Fraction(math.floor(max(vals, default=0)) + 1)
    extra = "x%d" % (k + 1)
    while extra in coords:
        extra = extra + "_"
    sphere = r2 + MultiPoly.var(extra) ** 2 - R2
    lifted = S + [sphere]
    boundary = _boundary_points(S, coords, r2 - R2)
    U0 = [b.extend(extra, MultiPoly.var(extra), (1,)) for b in boundary]
    for q in points:
        xs_exact = q
        rest = R2 - _exact_sum(q, coords, center)
        U0.append(xs_exact.extend(extra, MultiPoly.var(extra) ** 2 - rest, (1, 1)))
    info.update(mode="general", center=center, radius2=R2, extra=extra)
    kk = k + 1
    pieces = roadmap_bounded(lifted, p or default_block_size(kk), EMPTY, coords + [extra], U0, stats)
    info["boundary"] = boundary
    info["rays"] = [_ray(S, coords, center, b, float(R2)) for b in boundary]
    return pieces, info


def _exact_sum(q, coords, center):
    vals, exact = q.values()
    tot = Fraction(0)
    for v, c in zip(coords, center):
        x = exact.get(v) if exact else None
        if x is None:
            raise ValueError("query points must be rational")
        tot += (Fraction(x) - c) ** 2
    return tot


def _boundary_points(S, coords, sphere):
    """Points of the set on the sphere meeting every component of the intersection."""
    system = list(S) + [sphere]
    try:
        return dedupe_points(solve(system, coords), coords)
    except NotZeroDimensional:
        crit = system + _minors(_jac(system, coords[1:]), len(system))
        return dedupe_points(solve(crit, coords), coords)


def _ray(S, coords, center, b, R2, steps=40):
    """Numeric samples of the gradient line of the distance leaving the ball at ``b``."""
    import numpy as np
    x = np.array(point_values(b, coords), dtype=float)
    c = np.array([float(v) for v in center])
    polys = [MultiPoly.coerce(P) for P in S]
    grads = [[P.diff(v) for v in coords] for P in polys]

    def F(y):
        pt = dict(zip(coords, y))
        return np.array([P.eval_float(pt) for P in polys])

    def J(y):
        pt = dict(zip(coords, y))
        return np.array([[g.eval_float(pt) for g in row] for row in grads])
    out = [list(map(float, x))]
    h = math.sqrt(R2) / 8
    for _ in range(steps):
        Jx = J(x)
        d = x - c
        # tangent component of the outward direction
        q, _ = np.linalg.qr(Jx.T)
        d = d - q @ (q.T @ d)
        n = np.linalg.norm(d)
        if n < 1e-12:
            break
        y = x + h * d / n
        for _ in range(20):
            r = F(y)
            if np.linalg.norm(r) < 1e-12:
                break
            Jy = J(y)
            y = y - np.linalg.lstsq(Jy, r, rcond=None)[0]
        x = y
        out.append(list(map(float, x)))
        h *= 1.15
    return out


# graph ----------------------------------------------------------------------------------

@dataclass
class Vertex:
    id: int
    tower: TriangularThomEncoding
    anchor: list
    component: int = -1


@dataclass
class Edge:
    id: int
    v_from: int
    v_to: object
    param_var: str
    segment: object = None
    samples: list = field(default_factory=list)


@dataclass
class RoadmapGraph:
    k: int
    coords: list
    vertices: list
    edges: list
    components: int
    stats: dict = field(default_factory=dict)
    transform: list = None
    inverse: list = None

    def vertex_at(self, values):
        """Vertex at the rational point ``values`` (original coordinates), or None."""
        vals = [Fraction(x) for x in values]
        if self.inverse is not None:
            vals = _apply(self.inverse, vals)
        target = rational_point(vals, self.coords)
        for v in self.vertices:
            if _same_on(v.tower, target, self.coords):
                return v
        return None

    def component_of(self, values):
        v = self.vertex_at(values)
        return None if v is None else v.component

    def identity_coordinates(self):
        T = self.transform
        return T is None or all(T[i][j] == (i == j) for i in range(self.k) for j in range(self.k))

    def points_over(self, value):
        """Floating points of the edges swept by the first coordinate at ``value``.

        Only available when the coordinates were not changed.
        """
        if not self.identity_coordinates():
            raise ValueError("coordinates were changed; fibers are not axis aligned")
        x = Fraction(value)
        out = []
        for e in self.edges:
            seg = e.segment
            if seg is None or e.param_var != self.coords[0] or len(seg.base):
                continue
            try:
                out.append(_full_coords(seg, x, list(self.coords)))
            except ValueError:
                continue
        return out


def _same_on(a, b, names):
    va, vb = point_values(a, names), point_values(b, names)
    if any(abs(x - y) > 1e-6 * (1 + abs(x)) for x, y in zip(va, vb)):
        return False
    return same_point(a, b, names)


class _VertexIndex:
    def __init__(self, names):
        self.names = names
        self.items = []
        self.buckets = {}

    def _key(self, anchor):
        return tuple(round(a, 5) for a in anchor)

    def find(self, tower, anchor=None):
        anchor = anchor if anchor is not None else point_values(tower, self.names)
        for v in self.items:
            if all(abs(a - b) <= 1e-6 * (1 + abs(a)) for a, b in zip(anchor, v.anchor)):
                if same_point(v.tower, tower, self.names):
                    return v
        return None

    def add(self, tower):
        anchor = point_values(tower, self.names)
        v = self.find(tower, anchor)
        if v is not None:
            return v
        v = Vertex(len(self.items), tower, anchor)
        self.items.append(v)
        return v


def _full_coords(seg, x, names):
    """Floating point of a segment at parameter ``x`` in the order ``names``."""
    vals = dict(zip(seg.base.vars, seg.base.approx())) if len(seg.base) else {}
    vals.update(zip(seg.coords, eval_curve_segment(seg, x)))
    return [vals[n] for n in names]


def _edge_samples(seg, names, count):
    lo, hi = seg.left.approx()[-1], seg.right.approx()[-1]
    out = []
    for i in range(1, count + 1):
        t = lo + (hi - lo) * i / (count + 1)
        r = Fraction(t).limit_denominator(10 ** 12)
        try:
            out.append(_full_coords(seg, r, names))
        except (ValueError, RuntimeError):
            continue
    return out


def assemble_graph(pieces, coords, samples=8, project=None, rays=(), stats=None):
    """Union graph of roadmap pieces with exact vertex identification.

    ``project`` (a number of leading coordinates) identifies vertices by
    their projection and drops the other coordinates from the anchors.
    """
    names = list(coords)
    keep = names[:project] if project else names
    index = _VertexIndex(keep)
    for t in pieces.vertices:
        index.add(t)
    edges = []
    for seg, a, b in pieces.edges:
        if a is None or b is None:
            raise ValueError("edge references a missing vertex")
        va, vb = index.find(a), index.find(b)
        if va is None or vb is None:
            raise ValueError("edge references a missing vertex")
        smp = [va.anchor] + [s[:len(keep)] for s in _edge_samples(seg, names, samples)] + [vb.anchor]
        edges.append(Edge(len(edges), va.id, vb.id, seg.param, seg, smp))
    for b, ray in rays:
        vb = index.find(b) if b is not None else None
        edges.append(Edge(len(edges), vb.id if vb else None, None, "eps", None, ray))
    verts = index.items
    parent = list(range(len(verts)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i
    for e in edges:
        if e.v_from is not None and e.v_to is not None:
            ra, rb = root(e.v_from), root(e.v_to)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    labels = {}
    for v in verts:
        r = root(v.id)
        if r not in labels:
            labels[r] = len(labels)
        v.component = labels[r]
    st = dict(stats or {})
    st.update(vertices=len(verts), edges=len(edges))
    return RoadmapGraph(len(keep), keep, verts, edges, len(labels), st)


def _shear(k, rng):
    """Unit upper triangular matrix with small rational entries."""
    T = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            T[i][j] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([2, 3, 5, 7]))
    return T


def _unit_upper_inverse(T):
    k = len(T)
    inv = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for i in reversed(range(k)):
        for j in range(i + 1, k):
            inv[i] = [a - T[i][j] * b for a, b in zip(inv[i], inv[j])]
    return inv


def _apply(M, v):
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def rational_point(values, coords):
    """Tower with linear levels for a rational point."""
    node = EMPTY
    for v, x in zip(coords, values):
        node = node.extend(v, MultiPoly.var(v) - Fraction(x), (1,))
    return node


def roadmap(polys, points=(), p=None, coords=None, samples=8, budget=None, attempts=4):
    """Roadmap graph of ``Zer(polys)`` through the rational points ``points``.

    When the sweep is not generic enough for the given coordinates (a
    positive dimensional fiber shows up) the computation is redone after a
    fixed unit triangular change of coordinates; the graph keeps the
    transformed exact data but reports anchors and samples in the original
    coordinates.
    """
    import random
    S = [MultiPoly.coerce(P) for P in polys]
    coords = list(coords) if coords is not None else _free(S, EMPTY)
    k = len(coords)
    stats = _Stats(budget=_Budget(budget))
    last = None
    for attempt in range(attempts):
        T = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)] if attempt == 0 \
            else _shear(k, random.Random(attempt))
        Tinv = _unit_upper_inverse(T)
        mapping = {}
        for i, v in enumerate(coords):
            e = MultiPoly.constant(0)
            for j, w in enumerate(coords):
                if T[i][j]:
                    e = e + MultiPoly.constant(T[i][j]) * MultiPoly.var(w)
            mapping[v] = e
        S2 = [P.subs(mapping) for P in S]
        towers = [rational_point(_apply(Tinv, [Fraction(x) for x in q]), coords) for q in points]
        try:
            g = _roadmap_once(S2, towers, p, coords, samples, stats)
        except (NotSpecial, NotZeroDimensional) as exc:
            last = exc
            continue
        g.transform = T
        g.inverse = Tinv
        g.stats["attempts"] = attempt + 1
        _to_original(g, T)
        return g
    raise NotSpecial("no generic coordinates found: %s" % last)


def _to_original(g, T):
    k = len(T)
    for v in g.vertices:
        v.anchor = [float(x) for x in _apply(T, v.anchor[:k])]
    for e in g.edges:
        e.samples = [[float(x) for x in _apply(T, s[:k])] for s in e.samples]


def _roadmap_once(polys, points, p, coords, samples, stats):
    pieces, info = roadmap_general(polys, points, p, coords, stats)
    coords = info["coords"]
    st = {"max_depth": stats.max_depth, "curve_calls": stats.curve_calls, "mode": info["mode"]}
    if info["mode"] == "general":
        lifted = coords + [info["extra"]]
        rays = []
        for b, ray in zip(info["boundary"], info["rays"]):
            lifted_b = b.extend(info["extra"], MultiPoly.var(info["extra"]), (1,))
            rays.append((lifted_b, ray))
        pieces.vertices.extend(t for t, _ in rays)
        return assemble_graph(pieces, lifted, samples, project=len(coords), rays=rays, stats=st)
    return assemble_graph(pieces, coords, samples, stats=st)
