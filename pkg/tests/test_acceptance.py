"""One check per acceptance criterion; each prints a PASS or FAIL line.

Run directly (``python tests/test_acceptance.py``) or through pytest, which
repeats the lines in its terminal summary.
"""

import time

import pytest

from babygiant.curves import UnboundedInput, curve_segments, projection_critical_points, silhouette
from babygiant.limits import is_well_parametrized, limit_of_curve, reparametrize_curve, segment_end_point
from babygiant.poly import MultiPoly, poly
from babygiant.roadmap import roadmap
from babygiant.triangular import EMPTY, TriangularThomEncoding, pseudo_invert

from conftest import ACCEPTANCE_LINES
from test_limits import cylinder_curve
from test_roadmap import fiber_misses
from test_univariate import (check_kernel_case, check_subresultant_case, kernel_cases,
                             subresultant_cases)

TORUS = "36*(x1^2+((12*x2+5*x3)/13)^2) - (x1^2+x2^2+x3^2+8)^2"

GOLDEN = [
    ("circle", "x1^2 + x2^2 - 1", 1, 600),
    ("two circles", "(x1^2 + x2^2 - 1)*((x1 - 4)^2 + x2^2 - 1)", 2, 600),
    ("sphere", "x1^2 + x2^2 + x3^2 - 1", 1, 1800),
    ("hyperbola", "x1*x2 - 1", 2, 600),
    ("empty", "x1^2 + x2^2 + 1", 0, 600),
]


def golden_connectivity():
    notes, ok = [], True
    for name, text, expected, limit in GOLDEN:
        t = time.time()
        got = roadmap([poly(text)], budget=limit).components
        dt = time.time() - t
        good = got == expected and dt <= limit
        ok &= good
        notes.append("%s=%d(%.1fs)" % (name, got, dt))
    return ok, " ".join(notes)


def torus():
    t = time.time()
    comps = roadmap([poly(TORUS)], budget=7200).components
    dt = time.time() - t
    crit = projection_critical_points([poly(TORUS)], ["x1", "x2", "x3"])
    values = silhouette([poly(TORUS)], ["x1", "x2", "x3"])["critical_values"]
    ok = comps == 1 and len(crit) == 4 and len(values) == 6
    return ok, "components=%d (%.1fs) critical points=%d silhouette values=%d" % (
        comps, dt, len(crit), len(values))


def kernel_oracle():
    k_bad = sum(1 for c in kernel_cases() if not check_kernel_case(*c))
    s_bad = sum(1 for c in subresultant_cases() if not check_subresultant_case(*c))
    return k_bad == 0 and s_bad == 0, "sign/Thom failures %d/200, subresultant failures %d/100" % (k_bad, s_bad)


def pseudo_inverse():
    enc = TriangularThomEncoding([poly("t1^4 - t1^2 - 2")], [(1, 1, 1, 1)])
    g, c, enc2 = pseudo_invert(poly("t1^2 + 1"), enc)
    ok = enc2.levels[0] == poly("t1^2 - 2") and c == 3 and g == MultiPoly.constant(1)
    return ok, "updated level %s, value %s" % (enc2.levels[0], c)


def cylinder_limit():
    _, pts, segs = limit_of_curve(EMPTY, cylinder_curve())
    desc = ", ".join("%s on (%.3g, %.3g)" % ((s.param,) + tuple(x[-1] for x in (s.left.approx(), s.right.approx())))
                     for s in segs)
    if len(segs) != 1:
        return False, "%d segments: %s" % (len(segs), desc)
    s = segs[0]
    lo, hi = s.left.approx()[-1], s.right.approx()[-1]
    ends = [segment_end_point(s, -1).approx(), segment_end_point(s, 1).approx()]
    want = [[0, 0, 1], [0, 1, 0]]
    close = all(max(abs(a - b) for a, b in zip(e, w)) <= 1e-9 for e, w in zip(ends, want))
    ok = s.param == "x2" and abs(lo) < 1e-12 and abs(hi - 1) < 1e-12 and close
    return ok, "segment %s, ends %s" % (desc, ends)


def fiber_sampling():
    m2 = fiber_misses("x1^2 + x2^2 - 1", 2)
    m3 = fiber_misses("x1^2 + x2^2 + x3^2 - 1", 3)
    return m2 == 0 and m3 == 0, "misses circle=%d sphere=%d over 20 fibers each" % (m2, m3)


def well_parametrization():
    total, passed = 0, 0
    failures, skipped = [], []
    for name, text, _, _ in GOLDEN:
        try:
            out = curve_segments(EMPTY, poly(text))
        except UnboundedInput:
            skipped.append(name)
            continue
        for seg in out.all_curves():
            _, pieces = reparametrize_curve(EMPTY, seg)
            for w in pieces:
                total += 1
                if is_well_parametrized(w)[0]:
                    passed += 1
                else:
                    failures.append(name)
    _, _, segs = limit_of_curve(EMPTY, cylinder_curve())
    for w in segs:
        total += 1
        if is_well_parametrized(w)[0]:
            passed += 1
        else:
            failures.append("cylinder limit")
    detail = "%d/%d segments certified" % (passed, total)
    if failures:
        detail += "; failing: " + ", ".join(sorted(set(failures)))
    if skipped:
        detail += "; unbounded, no curve segments: " + ", ".join(skipped)
    return passed == total, detail


def recursion_depth():
    P = [poly("x1^2 + x2^2 + x3^2 + x4^2 - 1")]
    d2 = roadmap(P, p=2).stats["max_depth"]
    d1 = roadmap(P, p=1).stats["max_depth"]
    return d2 == 2 and d1 == 4, "depth p=2: %d, p=1: %d" % (d2, d1)


CRITERIA = [
    ("golden connectivity", golden_connectivity),
    ("torus", torus),
    ("kernel oracle suite", kernel_oracle),
    ("pseudo-inverse example", pseudo_inverse),
    ("cylinder curve limit", cylinder_limit),
    ("fiber sampling", fiber_sampling),
    ("well-parametrization certificate", well_parametrization),
    ("recursion depth by block size", recursion_depth),
]


def evaluate(name, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not hide
        ok, detail = False, "error: %r" % (exc,)
    line = "%s: %s (%s)" % ("PASS" if ok else "FAIL", name, detail)
    print(line, flush=True)
    return ok, line


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, fn):
    ok, line = evaluate(name, fn)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    for name, fn in CRITERIA:
        evaluate(name, fn)
