"""
Zero-dimensional real solving over a triangular Thom encoding.

A system is solved in three passes.

1. Variables occurring linearly with a constant coefficient are
   eliminated by substitution.
2. The remaining variables are eliminated from the top with resultants,
   giving one family of polynomials per variable (an elimination chain).
3. Points are lifted level by level: at a partial point the family of the
   next variable is replaced by its gcd at that point (computed with
   subresultants and exact zero tests) and its real roots are isolated.

Every candidate is finally checked exactly against the original equations,
so spurious factors introduced by resultants never survive.
"""

from itertools import combinations

from .poly import MultiPoly, ZERO, ONE
from .univariate import _subres_dense, _to_poly
from .triangular import (EMPTY, reduce_dense, euclid_at, TriangularThomEncoding, RealUnivariateRep,
                         ParamUnivariateRep, _dense, _strip_dense)
from . import flintbridge as fb
from .numeric import to_arb, working_prec

__all__ = ["NotZeroDimensional", "solve", "elimination_chain", "linear_substitutions",
           "gcd_at", "point_values", "same_point", "param_rep", "sample_components",
           "parametrized_sampling", "point_to_rep", "dedupe_points"]


class NotZeroDimensional(ValueError):
    pass


def _clean(polys):
    out = []
    seen = set()
    for p in polys:
        p = MultiPoly.coerce(p)
        if p.is_zero():
            continue
        if p.is_constant():
            out.append(p)
            continue
        q = p.primitive()
        if q.monic_sign() < 0:
            q = -q
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def linear_substitutions(system, free):
    """Eliminate variables that occur linearly with a constant coefficient.

    Returns ``(system', subs, remaining)``: ``subs`` maps each eliminated
    variable to a polynomial in the remaining ones.
    """
    system = _clean(system)
    subs = {}
    remaining = list(free)
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(system):
            for v in reversed(remaining):
                if p.degree(v) != 1:
                    continue
                lc = p.leading_coeff(v)
                if not lc.is_constant():
                    continue
                expr = -(p - lc * MultiPoly.var(v)) / lc.constant_value()
                subs = {w: e.subs({v: expr}) for w, e in subs.items()}
                subs[v] = expr
                remaining.remove(v)
                rest = system[:i] + system[i + 1:]
                system = _clean([q.subs({v: expr}) for q in rest])
                changed = True
                break
            if changed:
                break
    return system, subs, remaining


def elimination_chain(polys, vars_):
    """Families ``levels[j]`` of ideal members whose highest variable is ``vars_[j]``."""
    current = _clean(polys)
    levels = [[] for _ in vars_]
    for j in range(len(vars_) - 1, -1, -1):
        v = vars_[j]
        with_v = [p for p in current if v in p.vars]
        without = [p for p in current if v not in p.vars]
        with_v.sort(key=lambda p: (p.degree(v), p.total_degree(), len(p.terms)))
        levels[j] = with_v
        new = list(without)
        pairs = [(0, i) for i in range(1, len(with_v))]
        if len(with_v) > 2:
            pairs.append((1, 2))
        for a, b in pairs:
            r = fb.resultant(with_v[a], with_v[b], v)
            if r.is_zero() or r.is_constant():
                continue
            new.append(fb.squarefree(r))
        current = _clean(new)
    if any(p.is_constant() for p in current):
        # a nonzero constant in the ideal: no solutions at all
        return None
    return levels


def gcd_at(node, polys, var):
    """Gcd at the point of ``node`` of polynomials in ``var``.

    Polynomials vanishing identically at the point are ignored; returns None
    when all of them do.
    """
    acc = None
    for p in polys:
        d = _dense(p, var)
        while d and node.sign(d[-1]) == 0:
            d.pop()
        if not d:
            continue
        d = _reduce_at(node, d)
        while d and node.sign(d[-1]) == 0:
            d.pop()
        if not d:
            continue
        if acc is None:
            acc = d
            continue
        acc = _gcd_pair(node, acc, d)
        if len(acc) == 1:
            break
    return acc


def _gcd_pair(node, a, b):
    return euclid_at(node, a, b)


def _reduce_at(node, d):
    return reduce_dense(node, d)


def _exact_values(base):
    if base.has_eps or len(base) == 0:
        return {}
    _, exact = base.values()
    return exact


def solve(system, free, base=EMPTY):
    """Real solutions of a zero-dimensional system over the point ``base``.

    Returns towers extending ``base`` by every variable of ``free`` (the
    order of the added levels may differ from ``free``).  Raises
    NotZeroDimensional when some fiber is positive dimensional.
    """
    exact = _exact_values(base)
    orig = [MultiPoly.coerce(p) for p in system]
    sysx = [p.subs(exact) if exact else p for p in orig]
    sysx = [p for p in sysx if not (set(p.vars) <= set(base.vars) | {"eps"} and base.is_zero(p))]
    for p in sysx:
        if set(p.vars) <= set(base.vars) | {"eps"}:
            return []
    reduced, subs, remaining = linear_substitutions(sysx, free)
    if any(p.is_constant() for p in reduced):
        return []
    reduced = [p for p in reduced if not (set(p.vars) <= set(base.vars) | {"eps"} and base.is_zero(p))]
    if any(set(p.vars) <= set(base.vars) | {"eps"} for p in reduced):
        return []
    nodes = [base]
    if remaining:
        levels = elimination_chain(reduced, remaining)
        if levels is None:
            return []
        for j, v in enumerate(remaining):
            nxt = []
            for node in nodes:
                if not levels[j]:
                    raise NotZeroDimensional("variable %s is free in the fiber" % v)
                g = gcd_at(node, levels[j], v)
                if g is None:
                    g = _retry_specialized(node, reduced, remaining, j)
                    if g is None:
                        raise NotZeroDimensional("fiber over a point is positive dimensional")
                if len(g) <= 1:
                    continue
                nxt.extend(node.roots(_to_poly(_reduce_at(node, g), v), v))
            nodes = nxt
    out = []
    for node in nodes:
        for v, expr in _ordered_subs(subs, remaining):
            node = node.extend(v, MultiPoly.var(v) - expr, (1,))
        if all(node.is_zero(p) for p in orig):
            out.append(node)
    return out


def _retry_specialized(node, reduced, remaining, j):
    """Recompute the chain with the lower coordinates substituted when they are rational."""
    exact = _exact_values(node)
    if not exact or any(v not in exact for v in remaining[:j]):
        return None
    specialized = _clean([p.subs(exact) for p in reduced])
    specialized = [p for p in specialized if not p.is_zero()]
    if any(p.is_constant() for p in specialized):
        return [MultiPoly.constant(1)]
    levels = elimination_chain(specialized, remaining[j:])
    if levels is None:
        return [MultiPoly.constant(1)]
    if not levels[0]:
        return None
    return gcd_at(node, levels[0], remaining[j])


def _ordered_subs(subs, remaining):
    """Substituted variables in an order where each depends only on earlier ones."""
    done = set(remaining)
    todo = dict(subs)
    out = []
    while todo:
        for v, e in sorted(todo.items()):
            if set(e.vars) - {"eps"} <= done | set(_lower_vars(e, todo)):
                if not (set(e.vars) & set(todo)):
                    out.append((v, e))
                    done.add(v)
                    del todo[v]
                    break
        else:
            raise RuntimeError("cyclic substitution")
    return out


def _lower_vars(e, todo):
    return [w for w in e.vars if w not in todo]


# points ----------------------------------------------------------------------------

def point_values(node, names, prec=64):
    """Floating coordinates of a point tower in the order ``names``."""
    vals = dict(zip(node.vars, node.approx(prec)))
    return [vals[n] for n in names]


def same_point(a, b, names, tol=1e-6, exact=False):
    """Exact equality of two point towers on the coordinates ``names``."""
    va, vb = point_values(a, names), point_values(b, names)
    if any(abs(x - y) > tol * (1 + abs(x)) for x, y in zip(va, vb)):
        return False
    if _same_structure(a, b, names):
        return True
    ea, eb = _exact_values(a), _exact_values(b)
    if all(n in ea and n in eb for n in names):
        return all(ea[n] == eb[n] for n in names)
    if not exact:
        return _agree_at(a, b, names, SAME_POINT_PREC)
    ren = {v: v + "_b" for v in b.vars}
    joint = a
    for node in b.chain():
        joint = TriangularThomEncoding([node.level.rename(ren)], [node.sign_vec], [ren[node.var]], _parent=joint)
    return all(joint.is_zero(MultiPoly.var(n) - MultiPoly.var(ren[n])) for n in names)


SAME_POINT_PREC = 512


def _agree_at(a, b, names, prec):
    """Enclosures at ``prec`` bits overlap on every coordinate.

    Disjoint enclosures certify distinct points.  Overlap at this precision is
    taken as equality, which avoids exact arithmetic in a joint tower.
    """
    with working_prec(prec + 20):
        da, db = _balls(a, prec), _balls(b, prec)
        return all(da[n].overlaps(db[n]) for n in names)


def _balls(node, prec):
    vals, exact = node.values(prec)
    out = dict(vals)
    out.update((v, to_arb(x)) for v, x in exact.items())
    return out


def _same_structure(a, b, names):
    """Both towers agree level by level up to the last level involving ``names``."""
    if a is b:
        return True
    try:
        top = max(a.vars.index(n) for n in names) + 1
    except ValueError:
        return False
    if len(b) < top or a.vars[:top] != b.vars[:top]:
        return False
    return a.levels[:top] == b.levels[:top] and a.signs[:top] == b.signs[:top]


def dedupe_points(points, names):
    out = []
    for p in points:
        if not any(same_point(p, q, names) for q in out):
            out.append(p)
    return out


def point_to_rep(node, names):
    """RealUnivariateRep of a point tower: the top level is the univariate part."""
    parent = node.parent if node.parent is not None else EMPTY
    if len(node) == 0:
        raise ValueError("empty point")
    G = (ONE,) + tuple(MultiPoly.var(n) for n in names)
    return RealUnivariateRep(node.level, node.sign_vec, G, parent, node.var)


# parametrized representation --------------------------------------------------------

def param_rep(system, unknowns, lam=1, u="u"):
    """Rational parametrization of the solutions of ``system`` in ``unknowns``.

    The separating element is ``U = o1 + lam*o2 + lam^2*o3 + ...``.  Other
    variables of the system are parameters.  Returns ``(g, G)`` where ``g``
    vanishes at ``U`` for every solution and ``G = (G0, G_o1, ..., G_on)``
    gives the unknowns as ``G_oi / G0``.  Returns None when the elimination
    degenerates.
    """
    unknowns = list(unknowns)
    o1 = unknowns[0]
    U = MultiPoly.var(u)
    sub = U
    for i, o in enumerate(unknowns[1:], start=1):
        sub = sub - MultiPoly.constant(lam) ** i * MultiPoly.var(o)
    polys = _clean([MultiPoly.coerce(p).subs({o1: sub}) for p in system])
    if len(unknowns) == 1:
        g = None
        for p in polys:
            if u in p.vars:
                g = p if g is None else fb.gcd(g, p)
        if g is None or u not in g.vars:
            return None
        return fb.squarefree(g), (ONE, U)
    others = unknowns[1:]
    nums, dens, gs = {}, {}, []
    for o in others:
        rest = [w for w in others if w != o]
        levels = elimination_chain(polys, [u, o] + rest)
        if levels is None:
            return None
        cand = [p for p in levels[1] if p.degree(o) >= 1]
        found = False
        for A, B in combinations(cand, 2):
            if A.degree(o) < B.degree(o):
                A, B = B, A
            r = fb.resultant(A, B, o)
            if r.is_zero() or u not in r.vars:
                continue
            s1, s0 = _subres_linear(A, B, o)
            if s1 is None:
                continue
            gs.append(fb.squarefree(fb.content_free(r, u)))
            nums[o], dens[o] = -s0, s1
            found = True
            break
        if not found:
            return None
    g = gs[0]
    for h in gs[1:]:
        c = fb.gcd(g, h)
        if u in c.vars:
            g = c
    g = fb.squarefree(g)
    G0 = ONE
    for o in others:
        G0 = G0 * dens[o]
    G = {}
    for o in others:
        other_den = ONE
        for w in others:
            if w != o:
                other_den = other_den * dens[w]
        G[o] = nums[o] * other_den
    G1 = U * G0
    for i, o in enumerate(others, start=1):
        G1 = G1 - MultiPoly.constant(lam) ** i * G[o]
    G[o1] = G1
    return g, (G0,) + tuple(G[o] for o in unknowns)


def _subres_linear(A, B, var):
    """Coefficients ``(s1, s0)`` of the degree one signed subresultant of A and B in ``var``."""
    a, b = _dense(A, var), _dense(B, var)
    if len(a) == len(b):
        la, lb = a[-1], b[-1]
        b = _strip_dense([MultiPoly.coerce(x * la - y * lb) for x, y in zip(b, a)])
    if len(b) < 2:
        return None, None
    S, s, _, _ = _subres_dense(a, b, with_cofactors=False)
    S1 = S.get(1, [])
    if len(S1) != 2 or MultiPoly.coerce(S1[1]).is_zero():
        return None, None
    return MultiPoly.coerce(S1[1]), MultiPoly.coerce(S1[0])


# sampling ----------------------------------------------------------------------------

def sample_components(polys, variables=None):
    """Points meeting every bounded component of the zero set (critical points of x1)."""
    polys = [MultiPoly.coerce(p) for p in polys]
    if variables is None:
        vs = set()
        for p in polys:
            vs.update(p.vars)
        from .poly import sort_vars
        variables = list(sort_vars(tuple(vs)))
    variables = list(variables)
    if len(polys) == 1:
        P = fb.squarefree(polys[0])
        crit = [P] + [P.diff(v) for v in variables[1:]]
    else:
        crit = polys + _minors([[p.diff(v) for v in variables[1:]] for p in polys], len(polys))
    pts = solve(crit, variables)
    return [point_to_rep(p, variables) for p in dedupe_points(pts, variables)]


def parametrized_sampling(polys, params, variables=None):
    """Critical points of x1 on the zero set as representations with free parameters."""
    polys = [MultiPoly.coerce(p) for p in polys]
    if variables is None:
        vs = set()
        for p in polys:
            vs.update(v for v in p.vars if v not in params)
        from .poly import sort_vars
        variables = list(sort_vars(tuple(vs)))
    if len(polys) == 1:
        P = fb.squarefree(polys[0])
        crit = [P] + [P.diff(v) for v in variables[1:]]
    else:
        crit = polys + _minors([[p.diff(v) for v in variables[1:]] for p in polys], len(polys))
    for lam in (1, 2, 3, -1, 5):
        rep = param_rep(crit, variables, lam)
        if rep is not None:
            g, G = rep
            return [ParamUnivariateRep(g, G, tuple(params))]
    raise NotZeroDimensional("could not parametrize the critical locus")


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    acc = ZERO
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _minors(M, s):
    """All s x s minors of the matrix M (list of rows)."""
    rows = len(M)
    cols = len(M[0]) if M else 0
    if s > rows or s > cols:
        return []
    out = []
    for rs in combinations(range(rows), s):
        for cs in combinations(range(cols), s):
            d = _det([[M[r][c] for c in cs] for r in rs])
            if not d.is_zero():
                out.append(d)
    return out
