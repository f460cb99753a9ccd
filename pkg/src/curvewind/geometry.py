"""Planar kernels for the Euclidean plane and the upper half-plane.

A curve is a closed chain of arcs. In the Euclidean kernel an arc is a
straight segment parametrized affinely. In the hyperbolic kernel it is the
geodesic arc between its endpoints (a vertical piece or an arc of a circle
centred on the real axis), parametrized proportionally to hyperbolic arc
length, so arc parameters are preserved by isometries.

Tangents are always expressed in model coordinates. The half-plane model is
conformal, so signs of angles between tangents are meaningful.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import CuspTurn, MixedKernels, NonGeneric, Parallel

EUCLID = "euclid"
HYPERBOLIC = "hyperbolic"

# Smallest |sin| between crossing tangents accepted as transversal.
MIN_SIN = 1e-6
# Relative width under which a hyperbolic arc is treated as vertical.
_VERTICAL_TOL = 1e-12


def default_eps() -> float:
    return float(os.environ.get("CURVEWIND_EPS", "1e-9"))


def default_margin(eps: float | None = None) -> float:
    return 1e3 * (default_eps() if eps is None else eps)


class Point(NamedTuple):
    x: float
    y: float


class Direction(NamedTuple):
    dx: float
    dy: float


class Crossing(NamedTuple):
    point: Point
    u: float
    v: float
    sin: float


class Degeneracy(NamedTuple):
    kind: str  # "overlap" | "endpoint"
    point: Point


class Hits(NamedTuple):
    crossings: list
    flags: list


def unit(dx: float, dy: float) -> Direction:
    n = math.hypot(dx, dy)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return Direction(dx / n, dy / n)


def cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1]


def hyperbolic_distance(p, q) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * p[1] * q[1]))


def _psi(theta: float) -> float:
    # hyperbolic arc length coordinate along a semicircle
    return math.log(math.tan(0.5 * theta))


@dataclass(frozen=True)
class Arc:
    kernel: str
    a: Point
    b: Point
    _geo: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = Point(float(self.a[0]), float(self.a[1]))
        b = Point(float(self.b[0]), float(self.b[1]))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a == b:
            raise ValueError("arc endpoints coincide")
        if self.kernel == EUCLID:
            geo = ("s",)
        elif self.kernel == HYPERBOLIC:
            if a.y <= 0 or b.y <= 0:
                raise ValueError("hyperbolic points need y > 0")
            if abs(b.x - a.x) <= _VERTICAL_TOL * max(a.y, b.y):
                geo = ("v", 0.5 * (a.x + b.x), math.log(a.y), math.log(b.y))
            else:
                c = ((b.x * b.x + b.y * b.y) - (a.x * a.x + a.y * a.y)) / (2.0 * (b.x - a.x))
                r = math.hypot(a.x - c, a.y)
                ta = math.atan2(a.y, a.x - c)
                tb = math.atan2(b.y, b.x - c)
                geo = ("c", c, r, ta, tb, _psi(ta), _psi(tb))
        else:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        object.__setattr__(self, "_geo", geo)

    @property
    def is_vertical(self) -> bool:
        return self._geo[0] == "v"

    def point_at(self, u: float) -> Point:
        g = self._geo
        if g[0] == "s":
            return Point(self.a.x + u * (self.b.x - self.a.x), self.a.y + u * (self.b.y - self.a.y))
        if g[0] == "v":
            return Point(g[1], math.exp(g[2] + u * (g[3] - g[2])))
        _, c, r, ta, tb, pa, pb = g
        theta = 2.0 * math.atan(math.exp(pa + u * (pb - pa)))
        return Point(c + r * math.cos(theta), r * math.sin(theta))

    def tangent_at(self, u: float) -> Direction:
        g = self._geo
        if g[0] == "s":
            return unit(self.b.x - self.a.x, self.b.y - self.a.y)
        if g[0] == "v":
            return Direction(0.0, 1.0 if g[3] > g[2] else -1.0)
        _, c, r, ta, tb, pa, pb = g
        theta = 2.0 * math.atan(math.exp(pa + u * (pb - pa)))
        s = 1.0 if tb > ta else -1.0
        return Direction(-s * math.sin(theta), s * math.cos(theta))

    def param_of(self, p) -> float:
        """Parameter of a point assumed to lie on the arc's line/geodesic."""
        g = self._geo
        if g[0] == "s":
            d = (self.b.x - self.a.x, self.b.y - self.a.y)
            return dot((p[0] - self.a.x, p[1] - self.a.y), d) / dot(d, d)
        if g[0] == "v":
            return (math.log(p[1]) - g[2]) / (g[3] - g[2])
        _, c, r, ta, tb, pa, pb = g
        theta = math.atan2(p[1], p[0] - c)
        return (_psi(theta) - pa) / (pb - pa)

    def length(self) -> float:
        """Intrinsic length (Euclidean or hyperbolic)."""
        if self.kernel == EUCLID:
            return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)
        return hyperbolic_distance(self.a, self.b)

    def bbox(self) -> tuple:
        xs = (self.a.x, self.b.x)
        ys = (self.a.y, self.b.y)
        ymax = max(ys)
        if self._geo[0] == "c":
            _, c, r, ta, tb, _pa, _pb = self._geo
            if min(ta, tb) < 0.5 * math.pi < max(ta, tb):
                ymax = r
        return (min(xs), min(ys), max(xs), ymax)


def tangent_at(arc: Arc, u: float) -> Direction:
    return arc.tangent_at(u)


def _interval_overlap(lo1, hi1, lo2, hi2):
    return max(lo1, lo2), min(hi1, hi2)


def _classify(a1: Arc, a2: Arc, p: Point, u: float, v: float, eps: float, out: Hits):
    lo, hi = -eps, 1.0 + eps
    if not (lo <= u <= hi and lo <= v <= hi):
        return
    if min(u, 1.0 - u, v, 1.0 - v) <= eps:
        out.flags.append(Degeneracy("endpoint", p))
        return
    s = cross(a1.tangent_at(u), a2.tangent_at(v))
    out.crossings.append(Crossing(p, u, v, s))


def _collinear_overlap(a1: Arc, a2: Arc, eps: float, out: Hits):
    t0 = a1.param_of(a2.a)
    t1 = a1.param_of(a2.b)
    lo, hi = _interval_overlap(0.0, 1.0, min(t0, t1), max(t0, t1))
    if hi - lo > eps:
        out.flags.append(Degeneracy("overlap", a1.point_at(0.5 * (lo + hi))))
    elif hi - lo >= -eps:
        out.flags.append(Degeneracy("endpoint", a1.point_at(min(max(lo, 0.0), 1.0))))


def _euclid_hits(a1: Arc, a2: Arc, eps: float, out: Hits):
    d1 = (a1.b.x - a1.a.x, a1.b.y - a1.a.y)
    d2 = (a2.b.x - a2.a.x, a2.b.y - a2.a.y)
    w = (a2.a.x - a1.a.x, a2.a.y - a1.a.y)
    den = cross(d1, d2)
    scale = math.hypot(*d1) * math.hypot(*d2)
    if abs(den) <= eps * scale:
        if abs(cross(w, d1)) <= eps * math.hypot(*d1) * max(1.0, math.hypot(*w)):
            _collinear_overlap(a1, a2, eps, out)
        return
    u = cross(w, d2) / den
    v = cross(w, d1) / den
    _classify(a1, a2, a1.point_at(u), u, v, eps, out)


def _same_geodesic(g1, g2, eps) -> bool:
    if g1[0] != g2[0]:
        return False
    if g1[0] == "v":
        return abs(g1[1] - g2[1]) <= eps * max(1.0, abs(g1[1]))
    scale = max(1.0, g1[2])
    return abs(g1[1] - g2[1]) <= eps * scale and abs(g1[2] - g2[2]) <= eps * scale


def _hyperbolic_hits(a1: Arc, a2: Arc, eps: float, out: Hits):
    g1, g2 = a1._geo, a2._geo
    if _same_geodesic(g1, g2, eps):
        _collinear_overlap(a1, a2, eps, out)
        return
    if g1[0] == "v" and g2[0] == "v":
        return
    if g1[0] == "v" or g2[0] == "v":
        vx = g1[1] if g1[0] == "v" else g2[1]
        c, r = (g2[1], g2[2]) if g1[0] == "v" else (g1[1], g1[2])
        dx = vx - c
        y2 = r * r - dx * dx
        if y2 <= 0.0:
            return
        p = Point(vx, math.sqrt(y2))
    else:
        c1, r1, c2, r2 = g1[1], g1[2], g2[1], g2[2]
        if c1 == c2:
            return
        x = 0.5 * (c1 + c2) + (r1 * r1 - r2 * r2) / (2.0 * (c2 - c1))
        y2 = r1 * r1 - (x - c1) ** 2
        if y2 <= 0.0:
            return
        p = Point(x, math.sqrt(y2))
    _classify(a1, a2, p, a1.param_of(p), a2.param_of(p), eps, out)


def arc_intersection(a1: Arc, a2: Arc, eps: float | None = None) -> Hits:
    """Intersect two arcs of the same kernel.

    Transversal interior crossings go to ``crossings`` with both arc
    parameters and the sine of the crossing angle. Touches at an endpoint and
    collinear overlaps go to ``flags`` and are never reported as crossings.
    """
    if a1.kernel != a2.kernel:
        raise MixedKernels(f"{a1.kernel} vs {a2.kernel}")
    eps = default_eps() if eps is None else eps
    # evaluate in a canonical order so swapping the arguments only swaps u and v
    swap = (a2.a, a2.b) < (a1.a, a1.b)
    if swap:
        a1, a2 = a2, a1
    out = Hits([], [])
    if a1.kernel == EUCLID:
        _euclid_hits(a1, a2, eps, out)
    else:
        _hyperbolic_hits(a1, a2, eps, out)
    if swap:
        out.crossings[:] = [Crossing(h.point, h.v, h.u, -h.sin) for h in out.crossings]
    return out


def crossing_sign(v_early, v_late, eps: float | None = None) -> int:
    """+1 when the later branch crosses the earlier one from its left to its right."""
    eps = default_eps() if eps is None else eps
    det = v_late[0] * v_early[1] - v_late[1] * v_early[0]
    if abs(det) < eps:
        raise Parallel(f"parallel tangents {tuple(v_early)} and {tuple(v_late)}")
    return 1 if det > 0 else -1


def turn_angle(d1, d2) -> float:
    return math.atan2(cross(d1, d2), dot(d1, d2))


def turning_degree(dirs: Sequence, eps: float | None = None) -> int:
    eps = default_eps() if eps is None else eps
    n = len(dirs)
    total = 0.0
    for i in range(n):
        d1, d2 = dirs[i], dirs[(i + 1) % n]
        if dot(d1, d2) < 0 and abs(cross(d1, d2)) < eps:
            raise CuspTurn(f"antiparallel directions at index {i}")
        total += turn_angle(d1, d2)
    return int(round(total / (2.0 * math.pi)))


def polyline_directions(vertices: Sequence) -> list:
    n = len(vertices)
    return [unit(vertices[(i + 1) % n][0] - vertices[i][0], vertices[(i + 1) % n][1] - vertices[i][1])
            for i in range(n)]


def planar_crossings(vertices: Sequence, eps: float | None = None) -> list:
    """Transversal self-crossings of a closed planar polyline as (i, j, Crossing), i < j.

    Raises NonGeneric on overlaps, vertex incidences, near-tangencies or
    triple points.
    """
    eps = default_eps() if eps is None else eps
    margin = default_margin(eps)
    n = len(vertices)
    arcs = [Arc(EUCLID, vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    found = []
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            hits = arc_intersection(arcs[i], arcs[j], eps)
            if hits.flags:
                raise NonGeneric(f"segments {i} and {j}: {hits.flags[0].kind}")
            for h in hits.crossings:
                if abs(h.sin) < MIN_SIN:
                    raise NonGeneric(f"segments {i} and {j} cross tangentially")
                if min(h.u, 1 - h.u, h.v, 1 - h.v) < margin:
                    raise NonGeneric(f"segments {i} and {j} cross near a vertex")
                found.append((i, j, h))
    params = sorted(p for i, j, h in found for p in (i + h.u, j + h.v))
    for p, q in zip(params, params[1:]):
        if q - p < margin:
            raise NonGeneric("triple point")
    return found


def whitney_base_sum(vertices: Sequence, eps: float | None = None) -> int:
    """Whitney index of a closed generic planar polyline from its double points.

    Traversal starts at the lowest vertex (smallest y, then x), which lies on
    the outer boundary. The result is the sum of crossing signs, ordered by
    first passage from that base point, plus +1 or -1 for the turning sense
    at the base point.
    """
    pts = [Point(float(x), float(y)) for x, y in vertices]
    n = len(pts)
    if n < 3:
        raise NonGeneric("need at least three vertices")
    base = min(range(n), key=lambda i: (pts[i].y, pts[i].x))
    pts = pts[base:] + pts[:base]
    dirs = polyline_directions(pts)
    for k in range(n):
        d1, d2 = dirs[k - 1], dirs[k]
        if dot(d1, d2) < 0 and abs(cross(d1, d2)) < (eps or default_eps()):
            raise NonGeneric(f"cusp at vertex {k}")
    mu = 1 if cross(dirs[-1], dirs[0]) > 0 else -1
    total = 0
    for i, j, _h in planar_crossings(pts, eps):
        total += crossing_sign(dirs[i], dirs[j], eps)
    return total + mu
