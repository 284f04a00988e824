"""Matplotlib figures for roadmaps and silhouettes (written to image files)."""

import math
from fractions import Fraction

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .curves import eval_curve_segment


def _colors(n):
    cmap = plt.get_cmap("tab10")
    return [cmap(i % 10) for i in range(max(n, 1))]


def _zero_set_2d(ax, polys, coords, xlim, ylim):
    xs = np.linspace(*xlim, 300)
    ys = np.linspace(*ylim, 300)
    X, Y = np.meshgrid(xs, ys)
    for P in polys:
        if set(P.vars) - set(coords[:2]):
            continue
        grid = {coords[0]: X, coords[1]: Y}
        Z = np.zeros_like(X)
        for m, c in P.terms.items():
            term = np.full_like(X, float(c))
            for v, e in zip(P.vars, m):
                term = term * grid[v] ** e
            Z = Z + term
        ax.contour(X, Y, Z, levels=[0], colors="0.8", linewidths=3)


def _limits(points, pad=0.5):
    if not points:
        return (-1, 1), (-1, 1)
    arr = np.asarray(points, dtype=float)
    lo, hi = arr.min(axis=0) - pad, arr.max(axis=0) + pad
    return (lo[0], hi[0]), (lo[1], hi[1])


def plot_roadmap(g, path, polys=()):
    """Edges as sampled polylines and vertices colored by component.

    Three dimensional inputs use a 3D axis; higher dimensions show the first
    two coordinates.
    """
    colors = _colors(g.components)
    comp_of = {v.id: v.component for v in g.vertices}
    three = g.k == 3
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d") if three else fig.add_subplot()
    dims = 3 if three else min(g.k, 2)
    pts = []
    for e in g.edges:
        if not e.samples:
            continue
        arr = np.asarray(e.samples, dtype=float)[:, :dims]
        if dims == 1:
            arr = np.column_stack([arr[:, 0], np.zeros(len(arr))])
        pts.extend(arr[:, :2].tolist())
        c = colors[comp_of.get(e.v_from, 0) % len(colors)]
        style = "--" if e.v_to is None else "-"
        ax.plot(*arr.T, style, color=c, linewidth=1.5)
    for v in g.vertices:
        a = list(v.anchor[:dims]) + [0.0] * (2 - dims) if dims < 2 else list(v.anchor[:dims])
        pts.append(a[:2])
        ax.scatter(*a, color=colors[v.component % len(colors)], s=25, zorder=3)
    if g.k == 2 and polys:
        xlim, ylim = _limits(pts)
        _zero_set_2d(ax, polys, list(g.coords), xlim, ylim)
    names = list(g.coords)
    ax.set_xlabel(names[0])
    if g.k > 1:
        ax.set_ylabel(names[1])
    if three:
        ax.set_zlabel(names[2])
    else:
        ax.set_aspect("equal", adjustable="datalim")
    ax.set_title("roadmap: %d component(s)" % g.components)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _segment_polyline(seg, n=40):
    lo, hi = seg.approx_interval()
    lo = max(lo, -1e3) if math.isfinite(lo) else -10.0
    hi = min(hi, 1e3) if math.isfinite(hi) else 10.0
    out = []
    for t in np.linspace(lo, hi, n + 2)[1:-1]:
        try:
            out.append(eval_curve_segment(seg, Fraction(float(t)).limit_denominator(10 ** 9)))
        except (ValueError, ZeroDivisionError):
            continue
    return out


def plot_silhouette(result, path, n=40):
    """Critical curve in the first two coordinates with its distinguished values."""
    coords = result["coords"]
    fig, ax = plt.subplots(figsize=(6, 6))
    colors = _colors(len(result["segments"]))
    for i, seg in enumerate(result["segments"]):
        line = _segment_polyline(seg, n)
        if line:
            arr = np.asarray(line, dtype=float)
            ax.plot(arr[:, 0], arr[:, 1], color=colors[i % len(colors)], linewidth=1.5)
    for v in result["critical_values"]:
        ax.axvline(v.approx()[-1], color="0.6", linestyle=":", linewidth=1)
    pts = [p.approx() for p in result["critical_points"]]
    if pts:
        arr = np.asarray(pts, dtype=float)
        ax.scatter(arr[:, 0], arr[:, 1] if arr.shape[1] > 1 else np.zeros(len(arr)),
                   color="k", s=20, zorder=3)
    ax.set_xlabel(coords[0])
    if len(coords) > 1:
        ax.set_ylabel(coords[1])
    ax.set_title("critical curve: %d value(s)" % len(result["critical_values"]))
    fig.savefig(path, dpi=120)
    plt.close(fig)
