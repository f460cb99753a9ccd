"""Closed curves on surfaces, stored as one period of a chosen cover.

A CurveOnSurface holds vertices V_0 .. V_{N-1} in the universal cover and a
holonomy T0. The implied vertex V_N = T0(V_0) closes the period, and the
cover continues by gamma(u + 1) = T0 gamma(u). Curve parameters live in
[0, 1): parameter (i + f) / N is the point at fraction f of arc i.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from . import groups
from .errors import (
    IdentityHolonomy,
    MalformedCurve,
    MarginExceeded,
    MixedGroups,
    NonGeneric,
    NotParabolic,
    ParabolicHolonomy,
    TooCrowded,
)
from .geometry import (
    EUCLID,
    HYPERBOLIC,
    MIN_SIN,
    Arc,
    Point,
    arc_intersection,
    crossing_sign,
    default_eps,
    default_margin,
    hyperbolic_distance,
    turn_angle,
)
from .groups import Ball, Box, DeckElement, GroupModel

# Largest turning angle allowed at a vertex is pi - THETA_MIN.
THETA_MIN = 1e-3
DEFAULT_WORD_BOUND = 6
_AXIS_OFFSET = 0.1372


@dataclass(frozen=True)
class CurveOnSurface:
    model: GroupModel
    holonomy: DeckElement
    vertices: tuple

    def __post_init__(self):
        verts = tuple(Point(float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise MalformedCurve("a curve needs at least one vertex")
        if self.holonomy.group != self.model.kind:
            raise MalformedCurve(f"holonomy from {self.holonomy.group}, surface is {self.model.kind}")
        if not all(math.isfinite(c) for p in verts for c in p):
            raise MalformedCurve("non-finite coordinate")
        if self.model.kernel == HYPERBOLIC and any(p.y <= 0 for p in verts):
            raise MalformedCurve("hyperbolic vertices need y > 0")
        ext = self.lift_vertices
        for i in range(len(verts)):
            if ext[i] == ext[i + 1]:
                raise MalformedCurve(f"vertices {i} and {i + 1} coincide")
        worst = max(abs(a) for a in self.turn_angles)
        if worst >= math.pi - THETA_MIN:
            raise MalformedCurve(f"not regular: turning angle {worst:.6f} too close to pi")

    # model plumbing is compared by kind
    def __hash__(self):
        return hash((self.model.kind, self.holonomy, self.vertices))

    def __eq__(self, other):
        return (isinstance(other, CurveOnSurface) and self.model.kind == other.model.kind
                and self.holonomy == other.holonomy and self.vertices == other.vertices)

    @property
    def N(self) -> int:
        return len(self.vertices)

    @property
    def kernel(self) -> str:
        return self.model.kernel

    @cached_property
    def lift_vertices(self) -> tuple:
        """V_0 .. V_N."""
        return self.vertices + (self.model.apply_point(self.holonomy, self.vertices[0]),)

    @cached_property
    def arcs(self) -> tuple:
        ext = self.lift_vertices
        return tuple(Arc(self.kernel, ext[i], ext[i + 1]) for i in range(self.N))

    @cached_property
    def turn_angles(self) -> tuple:
        """Turning angle at V_1 .. V_N; the last one is the seam."""
        arcs = self.arcs
        out = [turn_angle(arcs[i - 1].tangent_at(1.0), arcs[i].tangent_at(0.0)) for i in range(1, self.N)]
        seam_out = self.model.apply_vector(self.holonomy, self.vertices[0], arcs[0].tangent_at(0.0))
        out.append(turn_angle(arcs[-1].tangent_at(1.0), seam_out))
        return tuple(out)

    def locate(self, param: float):
        x = (param % 1.0) * self.N
        i = min(int(math.floor(x)), self.N - 1)
        return i, x - i

    def point(self, param: float) -> Point:
        """gamma~(param) for param in [0, 1)."""
        i, f = self.locate(param)
        return self.arcs[i].point_at(f)

    def tangent(self, param: float):
        i, f = self.locate(param)
        return self.arcs[i].tangent_at(f)

    def window_region(self):
        if self.kernel == EUCLID:
            xs = [p.x for p in self.lift_vertices]
            ys = [p.y for p in self.lift_vertices]
            return Box(min(xs), min(ys), max(xs), max(ys))
        # Balls are geodesically convex, so containing the vertices suffices.
        ext = self.lift_vertices
        best = None
        for c in ext:
            r = max(hyperbolic_distance(c, p) for p in ext)
            if best is None or r < best.radius:
                best = Ball(c, r)
        return best

    def with_vertices(self, vertices) -> "CurveOnSurface":
        return CurveOnSurface(self.model, self.holonomy, tuple(vertices))


@dataclass(frozen=True)
class DoublePointEvent:
    s: float
    t: float
    T: DeckElement
    location: Point
    j: Optional[int]  # None for D0, else T = T0^j

    @property
    def kind(self) -> str:
        return "D0" if self.j is None else "Dpm"

    @property
    def key(self):
        return (self.T, self.j)


@dataclass(frozen=True)
class Violation:
    kind: str  # tangency | triple_point | vertex_incidence | margin_breach
    location: Point
    detail: str = ""


@dataclass(frozen=True)
class GenericityReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "location": [v.location.x, v.location.y], "detail": v.detail}
                for v in self.violations
            ],
        }


# --- scanning ----------------------------------------------------------------


def _boxes(arcs) -> np.ndarray:
    return np.array([a.bbox() for a in arcs], dtype=float)


def _skip_pair(i: int, j: int, T: DeckElement, c: CurveOnSurface, T0_inv: DeckElement) -> bool:
    n = c.N
    ident = c.model.identity()
    if T == ident and (i == j or abs(i - j) == 1):
        return True
    if T == c.holonomy and i == n - 1 and j == 0:
        return True
    if T == T0_inv and i == 0 and j == n - 1:
        return True
    return False


@lru_cache(maxsize=256)
def _analyze(c: CurveOnSurface, eps: float, word_bound: int):
    margin = default_margin(eps)
    n = c.N
    model = c.model
    ident = model.identity()
    T0 = c.holonomy
    T0_inv = model.inverse(T0)
    base = c.arcs
    bb = _boxes(base)
    pad = margin * max(1.0, float(np.abs(bb).max()))
    region = c.window_region()
    violations = []
    raw = []
    for T in groups.enumerate_overlapping(model, region, region, word_bound):
        if T == ident:
            tarcs, tb = base, bb
        else:
            tv = [model.apply_point(T, p) for p in c.lift_vertices]
            tarcs = [Arc(c.kernel, tv[k], tv[k + 1]) for k in range(n)]
            tb = _boxes(tarcs)
        ov = ((bb[:, None, 0] <= tb[None, :, 2] + pad) & (tb[None, :, 0] <= bb[:, None, 2] + pad)
              & (bb[:, None, 1] <= tb[None, :, 3] + pad) & (tb[None, :, 1] <= bb[:, None, 3] + pad))
        for i, j in zip(*np.nonzero(ov)):
            i, j = int(i), int(j)
            if T == ident and j < i:
                continue
            if _skip_pair(i, j, T, c, T0_inv):
                continue
            hits = arc_intersection(base[i], tarcs[j], eps)
            for f in hits.flags:
                kind = "tangency" if f.kind == "overlap" else "vertex_incidence"
                violations.append(Violation(kind, f.point, f"arc {i} vs {T}·arc {j}"))
            for h in hits.crossings:
                if abs(h.sin) < MIN_SIN:
                    violations.append(Violation("tangency", h.point, f"arc {i} vs {T}·arc {j}, sin={h.sin:.3g}"))
                    continue
                if min(h.u, 1 - h.u, h.v, 1 - h.v) < margin:
                    violations.append(Violation("margin_breach", h.point, f"crossing within margin of a vertex"))
                    continue
                raw.append(((i + h.u) / n, (j + h.v) / n, T))
    events = []
    for a, b, T in raw:
        if b < a:
            s, t, R = b, a, T
        else:
            s, t, R = a, b, model.inverse(T)
        events.append((s, t, R))
    events.sort(key=lambda e: (e[0], e[1]))
    merged = []
    for e in events:
        if any(abs(e[0] - m[0]) < 1e-7 and abs(e[1] - m[1]) < 1e-7 and e[2] == m[2] for m in merged):
            continue
        merged.append(e)
    out = []
    for s, t, R in merged:
        j = model.cyclic_power(R, T0) if not T0.is_identity else (0 if R == ident else None)
        out.append(DoublePointEvent(s, t, R, c.point(t), j))
    params = sorted((p, k) for k, e in enumerate(out) for p in (e.s, e.t))
    for (p, k1), (q, k2) in zip(params, params[1:]):
        if q - p < margin and k1 != k2:
            violations.append(Violation("triple_point", c.point(p), "two double points share a strand point"))
    if len(params) > 1 and params[0][0] + 1.0 - params[-1][0] < margin and params[0][1] != params[-1][1]:
        violations.append(Violation("triple_point", c.point(params[0][0]), "across the seam"))
    return GenericityReport(tuple(violations)), tuple(out)


def validate_generic(c: CurveOnSurface, eps: float | None = None,
                     word_bound: int = DEFAULT_WORD_BOUND) -> GenericityReport:
    eps = default_eps() if eps is None else eps
    return _analyze(c, eps, word_bound)[0]


def double_points(c: CurveOnSurface, eps: float | None = None,
                  word_bound: int = DEFAULT_WORD_BOUND) -> list:
    eps = default_eps() if eps is None else eps
    report, events = _analyze(c, eps, word_bound)
    if not report.ok:
        v = report.violations[0]
        raise NonGeneric(f"{v.kind} at ({v.location.x:.6g}, {v.location.y:.6g}): {v.detail}", report)
    return list(events)


def event_counter(events) -> Counter:
    return Counter(e.key for e in events)


def classify(c: CurveOnSurface, e: DoublePointEvent) -> Optional[int]:
    """j when the event lifts to a self-intersection of the cover (T = T0^j), else None."""
    return c.model.cyclic_power(e.T, c.holonomy)


def is_loop_trivial_event(c: CurveOnSurface, e: DoublePointEvent) -> bool:
    """One of the two loops at the double point is null-homotopic (T is id or T0)."""
    return e.T.is_identity or e.T == c.holonomy


def event_tangents(c: CurveOnSurface, e: DoublePointEvent):
    """(tangent of the s-branch moved to the double point by T, tangent of the t-branch)."""
    v_s = c.model.apply_vector(e.T, c.point(e.s), c.tangent(e.s))
    return v_s, c.tangent(e.t)


def event_sign(c: CurveOnSurface, e: DoublePointEvent, eps: float | None = None) -> int:
    """Crossing sign at the cover double point with parameters t and s + j."""
    if e.j is None:
        return 0
    v_s, v_t = event_tangents(c, e)
    if e.t < e.s + e.j:
        return crossing_sign(v_t, v_s, eps)
    return crossing_sign(v_s, v_t, eps)


def loop_classes_at(c: CurveOnSurface, e: DoublePointEvent):
    """Classes of the loops gamma|[s,t] and gamma|[t,s+1], and whether the first comes back from the left."""
    g1 = e.T
    g2 = c.model.compose(c.holonomy, c.model.inverse(e.T))
    v_s, v_t = event_tangents(c, e)
    return g1, g2, crossing_sign(v_s, v_t) == 1


# --- representatives -----------------------------------------------------------


def _hyperbolic_axis(m):
    """Centre and radius of the axis of a hyperbolic Moebius matrix, or None if vertical."""
    a, b, cc, d = m
    if cc == 0:
        return None
    disc = (d - a) ** 2 + 4 * b * cc
    root = math.sqrt(disc)
    f1 = ((a - d) + root) / (2 * cc)
    f2 = ((a - d) - root) / (2 * cc)
    return 0.5 * (f1 + f2), 0.5 * abs(f1 - f2)


def geodesic_representative(model: GroupModel, T0: DeckElement, samples: Optional[int] = None) -> CurveOnSurface:
    """The closed geodesic in the free homotopy class of T0, as one period of its lift."""
    if T0.group != model.kind:
        raise MixedGroups(f"{T0.group} vs {model.kind}")
    if T0.is_identity:
        raise IdentityHolonomy("the trivial class has no closed geodesic")
    if model.kernel == EUCLID:
        m, n = T0.payload
        if model.kind == "klein" and m & 1:
            start, end = Point(0.0, -n / 2), Point(float(m), -n / 2)
        elif model.kind == "klein":
            # y = 0 is the axis of A; a generic height keeps vertices off the A-translates
            start, end = Point(0.0, _AXIS_OFFSET), Point(float(m), n + _AXIS_OFFSET)
        else:
            start, end = Point(0.0, 0.0), Point(float(m), float(n))
        k = samples or 1
        verts = [Point(start.x + (end.x - start.x) * i / k, start.y + (end.y - start.y) * i / k) for i in range(k)]
        return CurveOnSurface(model, T0, tuple(verts))
    mat = model.matrix(T0)
    tr = abs(mat[0] + mat[3])
    if tr == 2:
        raise ParabolicHolonomy(f"{T0} is parabolic; use horocycle_representative")
    ell = 2.0 * math.acosh(tr / 2.0)
    k = samples or max(4, math.ceil(16 * ell))
    axis = _hyperbolic_axis(mat)
    if axis is None:
        x0 = mat[1] / (mat[3] - mat[0])
        top = Point(x0, 1.0)
    else:
        c, r = axis
        top = Point(c, r)
    z_top = complex(*top)
    fwd = groups.mobius(mat, z_top)
    bwd = groups.mobius(model.matrix(model.inverse(T0)), z_top)
    two_periods = Arc(HYPERBOLIC, Point(bwd.real, bwd.imag), Point(fwd.real, fwd.imag))
    # off-centre start keeps vertices away from symmetric self-crossings of the geodesic
    start = two_periods.point_at(0.25 + 0.5 * _AXIS_OFFSET)
    end_arc = Arc(HYPERBOLIC, start, two_periods.point_at(0.75 + 0.5 * _AXIS_OFFSET))
    verts = [end_arc.point_at(i / k) for i in range(k)]
    return CurveOnSurface(model, T0, tuple(verts))


def horocycle_representative(model: GroupModel, T0: DeckElement, height: float = 1.0,
                             samples: int = 1) -> CurveOnSurface:
    """Horocycle segment joining z to T0(z) around the cusp fixed by a parabolic T0."""
    if model.kernel != HYPERBOLIC or not groups.is_parabolic(T0):
        raise NotParabolic(f"{T0} is not a parabolic element")
    if height <= 0:
        raise ValueError("height must be positive")
    a, b, cc, d = model.matrix(T0)
    if cc == 0:
        to_model = lambda w: w  # noqa: E731
        tau = b / a
    else:
        p = (a - d) / (2 * cc)
        to_model = lambda w: p - 1.0 / w  # noqa: E731
        from_model = lambda z: -1.0 / (z - p)  # noqa: E731
        w0 = complex(0.0, height)
        tau = (from_model(groups.mobius((a, b, cc, d), to_model(w0))) - w0).real
    verts = []
    for i in range(samples):
        z = to_model(complex(tau * i / samples, height))
        verts.append(Point(z.real, z.imag))
    return CurveOnSurface(model, T0, tuple(verts))


# --- edits -------------------------------------------------------------------


def change_cover(c: CurveOnSurface, S: DeckElement) -> CurveOnSurface:
    if S.group != c.model.kind:
        raise MixedGroups(f"{S.group} vs {c.model.kind}")
    m = c.model
    return CurveOnSurface(m, m.compose(m.compose(S, c.holonomy), m.inverse(S)),
                          tuple(m.apply_point(S, p) for p in c.vertices))


def _span(c: CurveOnSurface, at: float, radius: float):
    i, f = c.locate(at)
    arc = c.arcs[i]
    delta = radius / arc.length()
    return i, f, arc, delta


def _crowding_check(c: CurveOnSurface, at: float, f: float, delta: float, events):
    margin = default_margin()
    if f - 2 * delta <= margin or f + 2 * delta >= 1 - margin:
        raise TooCrowded(f"footprint at {at:.6g} runs into a vertex or the seam")
    reach = 2 * delta / c.N
    for e in events:
        for p in (e.s, e.t):
            if min(abs(p - at), 1 - abs(p - at)) < reach:
                raise TooCrowded(f"double point at parameter {p:.6g} too close to {at:.6g}")


def _frame(arc: Arc, f: float, orientation: int):
    d = arc.tangent_at(f)
    n = (-d[1] * orientation, d[0] * orientation)
    return d, n


def _local(P, d, n, rho, x, y):
    return Point(P[0] + rho * (x * d[0] + y * n[0]), P[1] + rho * (x * d[1] + y * n[1]))


# A loop turning a full circle, at most pi/2 per vertex; crossing at (0, 1/2).
_KINK = ((1.0, 1.0), (1.0, 2.0), (-1.0, 2.0), (-1.0, 1.0))


def add_kink(c: CurveOnSurface, at: float, orientation: int, radius: float) -> CurveOnSurface:
    """Insert a small loop turning once in the given sense at parameter ``at``."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    events = double_points(c)
    i, f, arc, delta = _span(c, at, radius)
    _crowding_check(c, at, f, delta, events)
    q1, q2 = arc.point_at(f - delta), arc.point_at(f + delta)
    P = arc.point_at(f)
    d, n = _frame(arc, f, orientation)
    rho = 0.5 * math.hypot(q2.x - q1.x, q2.y - q1.y)
    loop = [_local(P, d, n, rho, x, y) for x, y in _KINK]
    verts = list(c.vertices)
    new = c.with_vertices(verts[:i + 1] + [q1, *loop, q2] + verts[i + 1:])
    report, new_events = _analyze(new, default_eps(), DEFAULT_WORD_BOUND)
    if not report.ok:
        raise TooCrowded(f"kink at {at:.6g} breaks genericity: {report.violations[0].kind}")
    old, cur = event_counter(events), event_counter(new_events)
    if old - cur or cur - old != Counter({(c.model.identity(), 0): 1}):
        raise TooCrowded(f"kink at {at:.6g} meets another strand")
    return new


def _regular_path(c: CurveOnSurface, new_vertices, steps: int = 8, limit: float = math.pi - 0.1):
    """Check that straight-line vertex interpolation stays regular."""
    a = np.array(c.vertices)
    b = np.array(new_vertices)
    for k in range(1, steps + 1):
        tau = k / steps
        v = (1 - tau) * a + tau * b
        try:
            mid = c.with_vertices(map(tuple, v))
        except (MalformedCurve, ValueError) as exc:
            raise MarginExceeded(f"deformation leaves regular curves: {exc}") from None
        if max(abs(x) for x in mid.turn_angles) > limit:
            raise MarginExceeded("deformation comes too close to a cusp")


def segment_lengths(c: CurveOnSurface) -> list:
    ext = c.lift_vertices
    return [math.hypot(ext[i + 1].x - ext[i].x, ext[i + 1].y - ext[i].y) for i in range(c.N)]


def perturb(c: CurveOnSurface, magnitude: float, seed: int, relative: bool = False) -> CurveOnSurface:
    """Seeded random vertex displacement, equivariant under the holonomy by construction.

    With ``relative`` the displacement of each vertex is scaled by the shorter
    of its two adjacent arcs (model length). Otherwise hyperbolic displacements
    are scaled by the height, so ``magnitude`` is roughly a hyperbolic length.
    """
    if magnitude == 0:
        return c
    rng = np.random.default_rng(seed)
    n = c.N
    ang = rng.uniform(0.0, 2.0 * math.pi, n)
    rad = magnitude * np.sqrt(rng.uniform(0.0, 1.0, n))
    lens = segment_lengths(c)
    verts = []
    for i, p in enumerate(c.vertices):
        scale = min(lens[i - 1], lens[i]) if relative else (p.y if c.kernel == HYPERBOLIC else 1.0)
        r = rad[i] * scale
        verts.append(Point(p.x + r * math.cos(ang[i]), p.y + r * math.sin(ang[i])))
    _regular_path(c, verts)
    new = c.with_vertices(verts)
    report = validate_generic(new)
    if not report.ok:
        raise MarginExceeded(f"perturbation is not generic: {report.violations[0].kind}")
    return new


def slide(c: CurveOnSurface, index: int, vector) -> CurveOnSurface:
    """Move one vertex by ``vector``; the result must stay regular and generic."""
    verts = list(c.vertices)
    p = verts[index]
    verts[index] = Point(p.x + vector[0], p.y + vector[1])
    _regular_path(c, verts)
    new = c.with_vertices(verts)
    if not validate_generic(new).ok:
        raise MarginExceeded("slide result is not generic")
    return new


# --- file format ----------------------------------------------------------------


def _num(x: float) -> str:
    s = format(float(x), ".17g")
    return s if any(ch in s for ch in ".eEn") else s + ".0"


def dumps_curve(c: CurveOnSurface) -> str:
    hol = c.model.to_json(c.holonomy)
    hol_s = json.dumps(hol) if isinstance(hol, str) else "[" + ", ".join(str(x) for x in hol) + "]"
    verts = ", ".join(f"[{_num(p.x)}, {_num(p.y)}]" for p in c.vertices)
    return f'{{"surface": "{c.model.kind}", "holonomy": {hol_s}, "vertices": [{verts}]}}\n'


def curve_from_json(obj: dict) -> CurveOnSurface:
    try:
        model = groups.MODELS[obj["surface"]]
        T0 = model.parse(obj["holonomy"])
        verts = tuple(Point(float(x), float(y)) for x, y in obj["vertices"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCurve(f"bad curve record: {exc}") from None
    return CurveOnSurface(model, T0, verts)


def loads_curve(text: str) -> CurveOnSurface:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCurve(f"not JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise MalformedCurve("curve file must hold an object")
    return curve_from_json(obj)


def load_curve(path) -> CurveOnSurface:
    with open(path, encoding="utf-8") as fh:
        return loads_curve(fh.read())


def save_curve(c: CurveOnSurface, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_curve(c))
