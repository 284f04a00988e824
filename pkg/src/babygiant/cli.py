"""Command line front end: ``babygiant components|connected|roadmap|export|silhouette FILE``."""

import argparse
import csv
import json
import re
import sys
from fractions import Fraction

from .poly import ParseError, parse_poly
from .roadmap import roadmap, BudgetExceeded
from .curves import NotSpecial, silhouette
from .solve import NotZeroDimensional

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_BUDGET = 0, 2, 3, 4

_VAR = re.compile(r"^x[1-9][0-9]*$")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class DomainError(ValueError):
    pass


def parse_system(text):
    """Polynomials, one per line; ``#`` starts a comment.  Returns ``(polys, k)``."""
    polys = []
    k = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "." in line:
            col = line.index(".") + 1
            raise ParseError("non-rational literal", lineno, col)
        for m in _NAME.finditer(line):
            if not _VAR.match(m.group()):
                raise ParseError("unknown variable '%s'" % m.group(), lineno, m.start() + 1)
        p = parse_poly(line, allow_eps=False, line=lineno)
        polys.append(p)
        for v in p.vars:
            k = max(k, int(v[1:]))
    return polys, k


def format_poly(p):
    return str(p)


def parse_point(text, k):
    """Comma separated rationals such as ``1/2,0``."""
    try:
        vals = [Fraction(s.strip()) for s in text.strip("()[] ").split(",")]
    except (ValueError, ZeroDivisionError):
        raise ParseError("bad point %r" % text, 1, 1)
    if len(vals) != k:
        raise DomainError("point %s has %d coordinates, expected %d" % (text, len(vals), k))
    return vals


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def residual(polys, coords, point):
    for P in polys:
        r = P.subs(dict(zip(coords, point)))
        val = r.constant_value() if r.is_constant() else r
        if val != 0:
            return val
    return 0


def _coords(k, order):
    names = ["x%d" % i for i in range(1, k + 1)]
    if not order:
        return names
    perm = [s.strip() for s in order.split(",") if s.strip()]
    if sorted(perm) != sorted(names):
        raise ParseError("--var-order must be a permutation of %s" % ",".join(names), 1, 1)
    return perm


# serialization ----------------------------------------------------------------------

def _int_str(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def _poly_json(p, variables):
    """Coefficients as decimal strings, monomials as exponent lists."""
    p = p.primitive() if hasattr(p, "primitive") and not p.is_zero() else p
    terms = []
    for m, c in sorted(p.terms.items()):
        exps = [0] * len(variables)
        for v, e in zip(p.vars, m):
            exps[variables.index(v)] = e
        terms.append({"coeff": _int_str(c), "exp": exps})
    return terms


def graph_json(g):
    verts = []
    for v in g.vertices:
        t = v.tower
        names = list(t.vars)
        levels = [{"var": var, "poly": _poly_json(f, names), "signs": list(sg)}
                  for var, f, sg in zip(t.vars, t.levels, t.signs)]
        verts.append({"id": v.id, "component": v.component, "anchor": list(v.anchor),
                      "rep": {"vars": names, "levels": levels}})
    edges = [{"id": e.id, "v_from": e.v_from, "v_to": e.v_to, "param_var": e.param_var,
              "samples": e.samples} for e in g.edges]
    out = {"k": g.k, "components": g.components, "vertices": verts, "edges": edges,
           "stats": g.stats}
    if g.transform is not None and any(g.transform[i][j] for i in range(g.k)
                                       for j in range(g.k) if i != j):
        out["transform"] = [[_int_str(x) for x in row] for row in g.transform]
    return out


def graph_dot(g):
    lines = ["graph roadmap {"]
    for v in g.vertices:
        label = ", ".join("%.4g" % x for x in v.anchor)
        lines.append('  v%d [label="(%s)", component=%d];' % (v.id, label, v.component))
    for e in g.edges:
        if e.v_to is None:
            lines.append('  ray%d [shape=point];' % e.id)
            lines.append('  v%d -- ray%d [style=dashed];' % (e.v_from, e.id) if e.v_from is not None
                         else '  ray%d;' % e.id)
        else:
            lines.append('  v%d -- v%d [label="%s"];' % (e.v_from, e.v_to, e.param_var))
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_csv(g, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["edge", "index"] + ["x%d" % (i + 1) for i in range(g.k)])
        for e in g.edges:
            for i, s in enumerate(e.samples):
                w.writerow([e.id, i] + ["%.17g" % x for x in s])


# commands ---------------------------------------------------------------------------

def _load(args):
    with open(args.input) as fh:
        text = fh.read()
    polys, k = parse_system(text)
    if not polys:
        raise ParseError("no polynomial in input", 1, 1)
    return polys, max(k, 1)


def _build(args, polys, k, points=()):
    coords = _coords(k, args.var_order)
    return roadmap(polys, points, p=args.p, coords=coords, samples=args.samples,
                   budget=args.budget)


def cmd_components(args):
    polys, k = _load(args)
    g = _build(args, polys, k)
    print(g.components)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump({"components": g.components, **g.stats}, fh, indent=2)
    return EXIT_OK


def cmd_connected(args):
    polys, k = _load(args)
    coords = ["x%d" % i for i in range(1, k + 1)]
    pts = [parse_point(args.point_a, k), parse_point(args.point_b, k)]
    for q in pts:
        r = residual(polys, coords, q)
        if r != 0:
            raise DomainError("point (%s) not on variety, residual %s"
                              % (",".join(_fmt(x) for x in q), _fmt(r)))
    g = _build(args, polys, k, pts)
    ca, cb = g.component_of(pts[0]), g.component_of(pts[1])
    if ca is None or cb is None:
        raise RuntimeError("query point missing from the roadmap")
    print("yes" if ca == cb else "no")
    return EXIT_OK


def cmd_roadmap(args):
    polys, k = _load(args)
    g = _build(args, polys, k)
    data = graph_json(g)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(data, fh, indent=1)
    else:
        json.dump(data, sys.stdout, indent=1)
        sys.stdout.write("\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(graph_dot(g))
    if args.csv:
        write_csv(g, args.csv)
    if args.plot:
        from .plotting import plot_roadmap
        plot_roadmap(g, args.plot, polys)
    return EXIT_OK


def cmd_silhouette(args):
    polys, k = _load(args)
    coords = _coords(k, args.var_order)
    out = silhouette(polys, coords)
    report = {"curve": [str(p) for p in out["curve"]],
              "coords": out["coords"],
              "critical_values": [v.approx()[-1] for v in out["critical_values"]],
              "critical_points": [p.approx() for p in out["critical_points"]],
              "segments": len(out["segments"])}
    print(json.dumps(report, indent=1))
    if args.plot:
        from .plotting import plot_silhouette
        plot_silhouette(out, args.plot)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="babygiant", description="Roadmaps and connectivity of real algebraic sets.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="file with one polynomial per line")
    common.add_argument("--var-order", default=None, help="comma separated permutation of x1..xk")
    common.add_argument("--p", type=int, default=None, help="block size (default round(sqrt(k)))")
    common.add_argument("--samples", type=int, default=8, help="samples per edge")
    common.add_argument("--seed", type=int, default=0, help="seed for test randomization")
    common.add_argument("--threads", type=int, default=1, help="worker threads (computation is sequential)")
    common.add_argument("--budget", type=float, default=None, help="time budget in seconds")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("components", parents=[common], help="count connected components")
    c.add_argument("--report", help="write a JSON report with roadmap statistics")
    c.set_defaults(func=cmd_components)
    c = sub.add_parser("connected", parents=[common], help="decide whether two points are connected")
    c.add_argument("point_a")
    c.add_argument("point_b")
    # let points such as -1,0 through as positionals
    c._negative_number_matcher = re.compile(r"^-[0-9][0-9/,-]*$")
    c.set_defaults(func=cmd_connected)
    for name in ("roadmap", "export"):
        c = sub.add_parser(name, parents=[common], help="export the roadmap")
        c.add_argument("-o", "--output", help="JSON output path (default stdout)")
        c.add_argument("--dot", help="also write a DOT graph")
        c.add_argument("--csv", help="also write CSV polyline samples")
        c.add_argument("--plot", help="render the roadmap to an image file")
        c.set_defaults(func=cmd_roadmap)
    c = sub.add_parser("silhouette", parents=[common], help="apparent contour of a surface in R^3")
    c.add_argument("--plot", help="render the silhouette to an image file")
    c.set_defaults(func=cmd_silhouette)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, NotSpecial, NotZeroDimensional) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DOMAIN
    except BudgetExceeded as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
