import math
from collections import Counter
from itertools import product

import pytest

from curvewind import curves
from curvewind.curves import (
    CurveOnSurface,
    DoublePointEvent,
    add_kink,
    change_cover,
    classify,
    double_points,
    dumps_curve,
    event_sign,
    geodesic_representative,
    horocycle_representative,
    loads_curve,
    loop_classes_at,
    perturb,
    validate_generic,
)
from curvewind.errors import (
    IdentityHolonomy,
    MalformedCurve,
    NonGeneric,
    NotParabolic,
    ParabolicHolonomy,
    TooCrowded,
)
from curvewind.geometry import Arc, Point, arc_intersection
from curvewind.groups import KLEIN, SANOV, TORUS

from conftest import curve_zoo

K, Tz, W = KLEIN.element, TORUS.element, SANOV.parse


def torus_geodesic(a=1, b=0, samples=4):
    return geodesic_representative(TORUS, Tz((a, b)), samples)


def kinked(orientations=(1,), base=None):
    c = base or torus_geodesic()
    for o in orientations:
        i = max(range(c.N), key=lambda k: c.arcs[k].length())
        c = add_kink(c, (i + 0.5) / c.N, o, 0.03)
    return c


def _scaled(points, s=0.1, at=(0.5, 0.5)):
    return tuple((at[0] + s * x, at[1] + s * y) for x, y in points)


def brute_force_events(c, reach=4):
    """Every crossing of the window with a translate of itself, found the slow way."""
    model = c.model
    n = c.N
    found = 0
    kinds = Counter()
    for T in model.ball_elements(reach):
        tv = [model.apply_point(T, p) for p in c.lift_vertices]
        for i, j in product(range(n), repeat=2):
            if T.is_identity and abs(i - j) <= 1:
                continue
            if T == c.holonomy and (i, j) == (n - 1, 0):
                continue
            if T == ~c.holonomy and (i, j) == (0, n - 1):
                continue
            hits = arc_intersection(c.arcs[i], Arc(c.kernel, tv[j], tv[j + 1]))
            found += len(hits.crossings)
            kinds["D0" if model.cyclic_power(T, c.holonomy) is None else "Dpm"] += len(hits.crossings)
    # each double point is seen once from each of its two strands
    return found // 2, Counter({k: v // 2 for k, v in kinds.items()})


# --- construction and validation ------------------------------------------------------


def test_malformed_curves():
    with pytest.raises(MalformedCurve):
        CurveOnSurface(TORUS, Tz((1, 0)), ())
    with pytest.raises(MalformedCurve):
        CurveOnSurface(TORUS, Tz((1, 0)), ((0, 0), (0, 0)))
    with pytest.raises(MalformedCurve):
        CurveOnSurface(SANOV, W("ab"), ((0, 1), (1, -1)))
    with pytest.raises(MalformedCurve):
        # seam turns back on itself
        CurveOnSurface(TORUS, Tz((1, 0)), ((0, 0), (2, 0)))
    with pytest.raises(MalformedCurve):
        CurveOnSurface(TORUS, K((1, 0)), ((0, 0),))


def test_geodesic_is_generic():
    c = geodesic_representative(TORUS, Tz((1, 0)))
    assert c.vertices == (Point(0, 0),)
    report = validate_generic(c)
    assert report.ok and report.violations == ()
    assert double_points(c) == []


def test_collinear_overlap_is_tangency():
    c = CurveOnSurface(TORUS, Tz((1, 0)), ((0, 0), (0.5, 0), (0.3, 1), (0.8, 1)))
    report = validate_generic(c)
    assert not report.ok
    assert "tangency" in {v.kind for v in report.violations}
    with pytest.raises(NonGeneric):
        double_points(c)


def test_triple_point_detected():
    star = _scaled([(-1, 0), (1, 0), (1, 1), (-1, -1), (0, -1), (0, 1), (-2, 1)])
    report = validate_generic(CurveOnSurface(TORUS, Tz((0, 0)), star))
    assert "triple_point" in {v.kind for v in report.violations}
    # the same star with one strand shifted off the common point is fine
    moved = _scaled([(-1, 0), (1, 0), (1, 1.3), (-1, -0.7), (0, -1), (0, 1), (-2, 1)])
    assert validate_generic(CurveOnSurface(TORUS, Tz((0, 0)), moved)).ok


def test_vertex_incidence_detected():
    pts = _scaled([(0, 0), (2, 0), (2, 1), (1, 0), (1, -1)])
    report = validate_generic(CurveOnSurface(TORUS, Tz((0, 0)), pts))
    assert "vertex_incidence" in {v.kind for v in report.violations}


def test_triple_point_through_translates():
    # arcs 0, 1, 2 pass through (0.45, 0.5), (0.45, 1.5), (0.45, 2.5): one point of the torus
    c = CurveOnSurface(TORUS, Tz((1, 0)), ((0, 0.1), (0.9, 0.9), (0.09, 1.98), (0.738, 2.916)))
    assert {v.kind for v in validate_generic(c).violations} == {"triple_point"}


# --- events -------------------------------------------------------------------------


def test_kink_gives_one_cover_event():
    c = kinked()
    events = double_points(c)
    assert len(events) == 1
    e = events[0]
    assert e.T.is_identity and e.j == 0 and classify(c, e) == 0
    assert event_sign(c, e) == 1


def test_opposite_kinks_have_opposite_signs():
    c = kinked((1, -1))
    events = double_points(c)
    assert [e.j for e in events] == [0, 0]
    assert sorted(event_sign(c, e) for e in events) == [-1, 1]


def test_events_match_brute_force():
    for c in curve_zoo():
        if c.kernel != "euclid":
            continue
        events = double_points(c)
        total, kinds = brute_force_events(c)
        assert len(events) == total
        assert Counter(e.kind for e in events) == kinds


def test_events_sorted_and_consistent():
    for c in curve_zoo():
        events = double_points(c)
        assert [(e.s, e.t) for e in events] == sorted((e.s, e.t) for e in events)
        for e in events:
            assert 0 <= e.s < e.t < 1
            p = c.model.apply_point(e.T, c.point(e.s))
            q = c.point(e.t)
            assert math.dist(p, q) < 1e-9 * max(1.0, abs(q.x), abs(q.y))
            assert (classify(c, e) is None) == (e.kind == "D0")
            assert classify(c, e) == e.j


def test_classify_examples():
    c = torus_geodesic()
    loc = Point(0.5, 0)
    assert classify(c, DoublePointEvent(0.1, 0.2, Tz((0, 0)), loc, 0)) == 0
    assert classify(c, DoublePointEvent(0.1, 0.2, Tz((1, 0)), loc, 1)) == 1
    assert classify(c, DoublePointEvent(0.1, 0.2, Tz((0, 1)), loc, None)) is None


def test_loop_classes_examples():
    c = kinked()
    g1, g2, _ = loop_classes_at(c, double_points(c)[0])
    assert (g1, g2) == (Tz((0, 0)), Tz((1, 0)))
    # a zigzag, so that tangents at s and t are not parallel
    c = CurveOnSurface(TORUS, Tz((1, 0)), ((0, 0), (0.25, 0.2), (0.5, 0), (0.75, 0.2)))
    for T, expect in ((Tz((1, 0)), Tz((0, 0))), (Tz((0, 1)), Tz((1, -1)))):
        e = DoublePointEvent(0.3, 0.7, T, Point(0, 0), c.model.cyclic_power(T, c.holonomy))
        g1, g2, _ = loop_classes_at(c, e)
        assert g1 == T and g2 == expect


def test_loop_classes_compose_to_holonomy():
    for c in curve_zoo():
        for e in double_points(c):
            g1, g2, _ = loop_classes_at(c, e)
            assert c.model.compose(g2, g1) == c.holonomy


# --- representatives ------------------------------------------------------------------


def test_geodesic_examples():
    c = geodesic_representative(TORUS, Tz((2, 3)))
    assert c.lift_vertices == (Point(0, 0), Point(2, 3))
    c = geodesic_representative(KLEIN, K((1, 4)))
    assert c.lift_vertices == (Point(0, -2), Point(1, -2))
    c = geodesic_representative(SANOV, W("ab"))
    assert SANOV.matrix(W("ab")) == (5, 2, 2, 1)
    for p in c.lift_vertices:
        assert math.hypot(p.x - 1, p.y) == pytest.approx(math.sqrt(2))
    assert c.N >= 16
    with pytest.raises(ParabolicHolonomy):
        geodesic_representative(SANOV, W("a"))
    with pytest.raises(IdentityHolonomy):
        geodesic_representative(TORUS, Tz((0, 0)))


def test_klein_even_geodesic_is_an_invariant_line():
    for m, n in ((2, 0), (2, 1), (0, 1), (4, -3)):
        c = geodesic_representative(KLEIN, K((m, n)))
        a, b = c.lift_vertices
        assert (b.x - a.x, b.y - a.y) == (m, n)
        assert validate_generic(c).ok


def test_horocycle_examples():
    c = horocycle_representative(SANOV, W("a"))
    assert c.lift_vertices == (Point(0, 1), Point(2, 1))
    c = horocycle_representative(SANOV, W("A"))
    assert c.lift_vertices == (Point(0, 1), Point(-2, 1))
    c = horocycle_representative(SANOV, W("b"), samples=6)
    # a horocycle at 0 is a circle tangent to the real axis there
    diam = [(p.x ** 2 + p.y ** 2) / p.y for p in c.lift_vertices]
    assert max(diam) - min(diam) < 1e-9
    assert validate_generic(c).ok
    with pytest.raises(NotParabolic):
        horocycle_representative(SANOV, W("ab"))


def test_representatives_have_no_cover_events():
    for hol in ((1, 0), (2, 3), (-1, 2), (3, -2)):
        assert not [e for e in double_points(geodesic_representative(TORUS, Tz(hol))) if e.j is not None]
    for hol in ((1, 0), (2, 0), (0, 1), (1, 3), (2, -1)):
        assert not [e for e in double_points(geodesic_representative(KLEIN, K(hol))) if e.j is not None]
    for w in ("ab", "aB", "abb", "aab"):
        T0 = W(w)
        c = horocycle_representative(SANOV, T0, samples=8) if w == "aB" else geodesic_representative(SANOV, T0)
        assert not [e for e in double_points(c) if e.j is not None]


# --- edits ----------------------------------------------------------------------------


def test_kink_counts():
    for c in curve_zoo():
        before = Counter(e.kind for e in double_points(c))
        for at in (0.13, 0.41, 0.77, 0.9):
            i, _ = c.locate(at)
            try:
                new = add_kink(c, at, 1, 0.05 * c.arcs[i].length())
            except TooCrowded:
                continue
            after = Counter(e.kind for e in double_points(new))
            assert after["Dpm"] == before["Dpm"] + 1 and after["D0"] == before["D0"]
            break


def test_kink_too_close_to_double_point():
    c = kinked()
    e = double_points(c)[0]
    with pytest.raises(TooCrowded):
        add_kink(c, e.s + 1e-12, 1, 1e-4)


def test_perturb_examples():
    c = torus_geodesic(2, 3, samples=6)
    assert perturb(c, 0.0, 5) == c
    p1, p2 = perturb(c, 0.01, 5), perturb(c, 0.01, 5)
    assert p1 == p2 and p1 != c
    assert double_points(p1) == []
    assert perturb(c, 0.01, 6) != p1


def test_change_cover_examples():
    c = kinked()
    assert change_cover(c, Tz((0, 0))) == c
    moved = change_cover(c, Tz((5, 5)))
    assert moved.holonomy == c.holonomy
    assert [(e.s, e.t, e.T) for e in double_points(moved)] == [(e.s, e.t, e.T) for e in double_points(c)]
    b = geodesic_representative(KLEIN, K((0, 1)), 4)
    assert change_cover(b, K((1, 0))).holonomy == K((0, -1))


def test_change_cover_keeps_event_multiset():
    for c in curve_zoo():
        base = Counter((e.kind, abs(event_sign(c, e))) for e in double_points(c))
        elements = [c.model.parse(w) for w in ("a", "bA", "B")] if c.kernel != "euclid" else \
            [c.model.element(p) for p in ((1, 0), (0, 1), (-1, 2), (3, -1))]
        for S in elements:
            d = change_cover(c, S)
            assert Counter((e.kind, abs(event_sign(d, e))) for e in double_points(d)) == base


# --- file format ----------------------------------------------------------------------


def test_round_trip():
    for c in curve_zoo():
        text = dumps_curve(c)
        assert loads_curve(text) == c
        assert dumps_curve(loads_curve(text)) == text


def test_file_format_example():
    c = loads_curve('{"surface": "sanov", "holonomy": "ab", "vertices": [[0.5, 1.2], [1.5, 1.3]]}')
    assert c.holonomy == W("ab") and c.N == 2
    c = loads_curve('{"surface": "klein", "holonomy": [2, 0], "vertices": [[0, 0.25]]}')
    assert c.holonomy == K((2, 0))
    for bad in ("[]", "{", '{"surface": "cylinder", "holonomy": [1, 0], "vertices": [[0, 0]]}',
                '{"surface": "torus", "holonomy": [1.5, 0], "vertices": [[0, 0]]}',
                '{"surface": "sanov", "holonomy": "abx", "vertices": [[0, 1]]}'):
        with pytest.raises(MalformedCurve):
            loads_curve(bad)
