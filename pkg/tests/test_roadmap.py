import random
from fractions import Fraction

import pytest

from babygiant.poly import poly
from babygiant.roadmap import (assemble_graph, build_deformation, default_block_size, roadmap,
                               RoadmapPieces)


def components(text, **kw):
    return roadmap([poly(p) for p in text.split(";")], **kw).components


@pytest.mark.parametrize("text,expected", [
    ("x1^2 + x2^2 - 1", 1),
    ("(x1^2 + x2^2 - 1)*((x1 - 4)^2 + x2^2 - 1)", 2),
    ("x1^2 + x2^2 + x3^2 - 1", 1),
    ("x1*x2 - 1", 2),
    ("x1^2 + x2^2 + 1", 0),
    ("x2 - x1^2", 1),
    ("(x1^2 + x2^2 - 1)^2", 1),
    ("(x1^2 - 1)^2 + x2^2 + x3^2 - 1/2", 2),
    ("x1 + x2 + x3", 1),
    ("x1 - x2; x2 - x3", 1),
])
def test_golden_components(text, expected):
    assert components(text) == expected


def test_parabola_has_two_rays():
    g = roadmap([poly("x2 - x1^2")])
    assert sum(1 for e in g.edges if e.v_to is None) == 2


def test_deformation_formula():
    D, crit = build_deformation(poly("(x1^2 + x2^2 - 1)^2"), 0, dbar=(6, 6), k=2)
    expected = poly("-eps*(x1^6 + x2^6 + x2^2 + x3^2 + 4) + (x1^2 + x2^2 - 1)^2")
    assert D == expected
    assert crit == [D, D.diff("x2"), D.diff("x3")]
    with pytest.raises(ValueError):
        build_deformation(poly("x1^2 + x2^2 - 1"), 0, dbar=(2, 2), k=2)


def test_block_size_default():
    assert [default_block_size(k) for k in (1, 2, 3, 4, 9)] == [1, 1, 2, 2, 3]


def test_recursion_depth_by_block_size():
    P = [poly("x1^2 + x2^2 + x3^2 + x4^2 - 1")]
    assert roadmap(P, p=2).stats["max_depth"] == 2
    assert roadmap(P, p=1).stats["max_depth"] == 4


def test_connectivity_queries():
    g = roadmap([poly("(x1^2 + x2^2 - 1)*((x1 - 4)^2 + x2^2 - 1)")], points=[(0, 1), (4, 1), (-1, 0)])
    assert g.component_of((0, 1)) == g.component_of((-1, 0))
    assert g.component_of((0, 1)) != g.component_of((4, 1))


def residuals(g, polys):
    out = []
    names = list(g.coords)
    for p in [v.anchor for v in g.vertices] + [s for e in g.edges for s in e.samples]:
        out.append(max(abs(P.eval_float(dict(zip(names, p)))) for P in polys))
    return out


@pytest.mark.parametrize("text", ["x1^2 + x2^2 - 1", "x1^2 + x2^2 + x3^2 - 1", "x1*x2 - 1"])
def test_roadmap_points_lie_on_the_set(text):
    polys = [poly(text)]
    g = roadmap(polys, samples=50)
    assert max(residuals(g, polys)) <= 1e-9


def fiber_misses(text, k, seed=0, fibers=20):
    """Fiber components (numerically identified) not met by the roadmap within 1e-6."""
    g = roadmap([poly(text)])
    rng = random.Random(seed)
    misses = 0
    for _ in range(fibers):
        a = Fraction(rng.randint(-2000, 2000), 1000)
        pts = g.points_over(a)
        r2 = 1 - float(a) ** 2
        if r2 <= 0:
            continue
        if k == 2:
            comps = [(float(a), r2 ** 0.5), (float(a), -r2 ** 0.5)]
            for c in comps:
                if not any(max(abs(x - y) for x, y in zip(c, p)) <= 1e-6 for p in pts):
                    misses += 1
        else:
            on = [p for p in pts if abs(p[0] - float(a)) <= 1e-12 and abs(p[1] ** 2 + p[2] ** 2 - r2) <= 1e-6]
            if not on:
                misses += 1
    return misses


def test_fiber_sampling_circle_and_sphere():
    assert fiber_misses("x1^2 + x2^2 - 1", 2) == 0
    assert fiber_misses("x1^2 + x2^2 + x3^2 - 1", 3) == 0


def test_assemble_empty():
    g = assemble_graph(RoadmapPieces(), ["x1", "x2"])
    assert g.components == 0 and g.vertices == []
