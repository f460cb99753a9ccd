"""Regular-homotopy moves and an invariance fuzzer.

A regular homotopy is witnessed by a chain of validated curves, one move at
a time. Moves are vertex-level edits: seeded perturbation, a finger pushed
across a nearby strand (birth of two double points), and a pair of opposite
kinks.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import curves, groups
from .curves import (
    DEFAULT_WORD_BOUND,
    CurveOnSurface,
    _analyze,
    _crowding_check,
    _frame,
    _span,
    add_kink,
    double_points,
    dumps_curve,
    event_counter,
    event_sign,
    geodesic_representative,
    horocycle_representative,
    perturb,
)
from .errors import (
    CurvewindError,
    MalformedCurve,
    MarginExceeded,
    NoNearbyStrand,
    NonGeneric,
    TooCrowded,
)
from .geometry import EUCLID, Arc, Point, arc_intersection, default_eps, hyperbolic_distance
from .groups import Ball, Box, DeckElement, GroupModel
from .invariants import compute_invariants, detect_case, OP_NONREVERSIBLE

_RECOVERABLE = (TooCrowded, MarginExceeded, NoNearbyStrand, MalformedCurve, NonGeneric, ValueError)


@dataclass
class FingerResult:
    curve: CurveOnSurface
    index: int  # first inserted vertex
    events: tuple  # the two new double points
    signs: tuple

    @property
    def family(self) -> str:
        return self.events[0].kind


def _probe_region(c: CurveOnSurface, a: Point, b: Point):
    region = c.window_region()
    if c.kernel == EUCLID:
        return Box(min(region.xmin, a.x, b.x), min(region.ymin, a.y, b.y),
                   max(region.xmax, a.x, b.x), max(region.ymax, a.y, b.y))
    r = max(region.radius, hyperbolic_distance(region.center, a), hyperbolic_distance(region.center, b))
    return Ball(region.center, r)


def nearest_strand(c: CurveOnSurface, at: float, side: int, reach: float):
    """First strand met by a probe leaving gamma(at) along the normal on ``side``."""
    i, f = c.locate(at)
    arc = c.arcs[i]
    P = arc.point_at(f)
    d, n = _frame(arc, f, side)
    L = reach if c.kernel == EUCLID else reach * P.y
    end = Point(P.x + L * n[0], P.y + L * n[1])
    if c.kernel != EUCLID and end.y <= 0:
        end = Point(end.x, 0.5 * P.y)
    probe = Arc(c.kernel, P, end)
    model = c.model
    region = _probe_region(c, P, end)
    best = None
    for T in groups.enumerate_overlapping(model, region, c.window_region(), DEFAULT_WORD_BOUND):
        tv = [model.apply_point(T, p) for p in c.lift_vertices]
        for k in range(c.N):
            if T.is_identity and k == i:
                continue
            for h in arc_intersection(probe, Arc(c.kernel, tv[k], tv[k + 1])).crossings:
                if h.u > 1e-9 and (best is None or h.u < best[0]):
                    best = (h.u, h.point, T, k)
    if best is None:
        raise NoNearbyStrand(f"nothing within reach {reach} of parameter {at:.6g}")
    return best[1], best[2]


def _default_reach(c: CurveOnSurface, radius: float) -> float:
    region = c.window_region()
    if c.kernel == EUCLID:
        return max(40 * radius, region.xmax - region.xmin, region.ymax - region.ymin)
    return max(40 * radius, 2 * region.radius)


def finger_move(c: CurveOnSurface, at: float, radius: float, side: int = 1,
                reach: Optional[float] = None) -> FingerResult:
    events = double_points(c)
    i, f, arc, delta = _span(c, at, radius)
    _crowding_check(c, at, f, delta, events)
    Q, _T = nearest_strand(c, at, side, reach if reach is not None else _default_reach(c, radius))
    P = arc.point_at(f)
    d, _n = _frame(arc, f, side)
    f1, f4 = arc.point_at(f - delta), arc.point_at(f + delta)
    w = 0.5 * math.hypot(f4.x - f1.x, f4.y - f1.y)
    dist = math.hypot(Q.x - P.x, Q.y - P.y)
    e = ((Q.x - P.x) / dist, (Q.y - P.y) / dist)
    depth = dist + w
    tip = Point(P.x + depth * e[0], P.y + depth * e[1])
    half = 0.5 * w
    f2 = Point(tip.x - half * d[0], tip.y - half * d[1])
    f3 = Point(tip.x + half * d[0], tip.y + half * d[1])
    verts = list(c.vertices)
    new = c.with_vertices(verts[:i + 1] + [f1, f2, f3, f4] + verts[i + 1:])
    report, new_events = _analyze(new, default_eps(), DEFAULT_WORD_BOUND)
    if not report.ok:
        raise TooCrowded(f"finger at {at:.6g} is not generic: {report.violations[0].kind}")
    old, cur = event_counter(events), event_counter(new_events)
    added = cur - old
    if old - cur or sum(added.values()) != 2 or len(added) != 1:
        raise TooCrowded(f"finger at {at:.6g} does not cross exactly one strand twice")
    key = next(iter(added))
    lo, hi = (i + 1) / new.N, (i + 5) / new.N
    fresh = tuple(ev for ev in new_events if ev.key == key and (lo <= ev.s <= hi or lo <= ev.t <= hi))
    if len(fresh) != 2:
        raise TooCrowded("finger crossings are not on the finger")
    signs = tuple(event_sign(new, ev) for ev in fresh)
    if fresh[0].j is not None and signs[0] + signs[1] != 0:
        raise AssertionError(f"birth of two cover double points with equal signs {signs}")
    return FingerResult(new, i + 1, fresh, signs)


def birth_death_pair(c: CurveOnSurface, at: float, radius: float, side: int = 1,
                     reach: Optional[float] = None) -> CurveOnSurface:
    """Push a finger from gamma(at) across the nearest strand, creating two double points."""
    return finger_move(c, at, radius, side, reach).curve


def retract(c: CurveOnSurface, index: int, count: int = 4) -> CurveOnSurface:
    """Remove ``count`` vertices starting at ``index`` (undoes a finger or kink)."""
    verts = list(c.vertices)
    return c.with_vertices(verts[:index] + verts[index + count:])


def kink_pair(c: CurveOnSurface, at1: float, at2: float, radius: float) -> CurveOnSurface:
    """Add a positive kink at at1 and a negative one at at2 (distinct arcs)."""
    i1, f1 = c.locate(at1)
    i2, f2 = c.locate(at2)
    if i1 == i2:
        raise TooCrowded("kinks of a pair need distinct arcs")
    first, second = ((at2, -1), (i1, f1, 1)) if i2 > i1 else ((at1, 1), (i2, f2, -1))
    mid = add_kink(c, first[0], first[1], radius)
    k, f, o = second
    return add_kink(mid, (k + f) / mid.N, o, radius)


# --- constructions --------------------------------------------------------------


def representative(model: GroupModel, T0: DeckElement, samples: Optional[int] = None) -> CurveOnSurface:
    if groups.is_parabolic(T0):
        return horocycle_representative(model, T0, 1.0, samples or 8)
    return geodesic_representative(model, T0, samples)


def _kink_sites(c: CurveOnSurface):
    order = sorted(range(c.N), key=lambda k: -c.arcs[k].length())
    for scale in (0.1, 0.03, 0.01):
        for frac in (0.5, 0.3, 0.7):
            for k in order:
                yield (k + frac) / c.N, scale * c.arcs[k].length()


def add_kinks(c: CurveOnSurface, k: int) -> CurveOnSurface:
    orientation = 1 if k > 0 else -1
    for _ in range(abs(k)):
        for at, radius in _kink_sites(c):
            try:
                c = add_kink(c, at, orientation, radius)
                break
            except TooCrowded:
                continue
        else:
            raise TooCrowded("no room left for another kink")
    return c


def build_w_k_curve(model: GroupModel, T0: DeckElement, k: int, seed: int = 0) -> CurveOnSurface:
    """Representative of the class of T0, perturbed, with |k| kinks of sign k."""
    samples = None
    if model.kernel == EUCLID:
        samples = max(8, 2 * abs(k) + 4)
    elif groups.is_parabolic(T0):
        samples = max(8, 2 * abs(k) + 4)
    base = representative(model, T0, samples)
    for mag in (0.05, 0.02, 0.005):
        try:
            c = perturb(base, mag, seed, relative=True)
            break
        except MarginExceeded:
            continue
    else:
        raise MarginExceeded("could not perturb the representative into general position")
    return add_kinks(c, k)


# --- fuzzing --------------------------------------------------------------------


@dataclass
class MoveTrace:
    moves: list = field(default_factory=list)
    before: int = 0
    after: int = 0


def random_move(c: CurveOnSurface, rng: np.random.Generator, attempts: int = 25):
    """One random regular-homotopy move: 70% perturb, 20% finger, 10% kink pair.

    Returns (description, new curve, FingerResult or None), or None if every
    attempt failed.
    """
    for _ in range(attempts):
        r = rng.random()
        try:
            if r < 0.7:
                mag = float(rng.uniform(0.02, 0.2))
                s = int(rng.integers(2**31))
                return {"move": "perturb", "seed": s, "magnitude": mag}, perturb(c, mag, s, relative=True), None
            if r < 0.9:
                at = float(rng.random())
                i, _f = c.locate(at)
                radius = 0.15 * c.arcs[i].length()
                side = 1 if rng.random() < 0.5 else -1
                fr = finger_move(c, at, radius, side)
                return {"move": "finger", "at": at, "radius": radius, "side": side}, fr.curve, fr
            a1, a2 = (float(x) for x in rng.random(2))
            i1, _ = c.locate(a1)
            i2, _ = c.locate(a2)
            radius = 0.1 * min(c.arcs[i1].length(), c.arcs[i2].length())
            return {"move": "kink_pair", "at": [a1, a2], "radius": radius}, kink_pair(c, a1, a2, radius), None
        except _RECOVERABLE:
            continue
    return None


@dataclass
class SuiteReport:
    case: str
    trials: int
    moves_applied: int = 0
    baseline: Optional[int] = None
    violations: list = field(default_factory=list)
    pair_families: Counter = field(default_factory=Counter)
    bad_pairs: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.bad_pairs

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "trials": self.trials,
            "moves_applied": self.moves_applied,
            "baseline": self.baseline,
            "ok": self.ok,
            "violations": self.violations,
            "pair_families": dict(self.pair_families),
            "bad_pairs": self.bad_pairs,
        }


def invariance_suite(c: CurveOnSurface, trials: int, seed: int = 0, moves: int = 3,
                     invariant: Optional[Callable[[CurveOnSurface], int]] = None,
                     ref: Optional[DeckElement] = None) -> SuiteReport:
    """Apply random move sequences and check the invariant never changes."""
    case = detect_case(c)
    if case == OP_NONREVERSIBLE and ref is None:
        ref = c.holonomy
    if invariant is None:
        invariant = lambda x: compute_invariants(x, ref).value  # noqa: E731
    report = SuiteReport(case, trials, baseline=invariant(c))
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        cur = c
        trace = MoveTrace(before=report.baseline)
        for _ in range(moves):
            step = random_move(cur, rng)
            if step is None:
                continue
            desc, new, finger = step
            trace.moves.append(desc)
            report.moves_applied += 1
            if finger is not None:
                fam = finger.family
                report.pair_families[fam] += 1
                same_key = finger.events[0].key == finger.events[1].key
                if not same_key or (fam == "Dpm" and sum(finger.signs) != 0):
                    report.bad_pairs.append({"trial": trial, "signs": list(finger.signs)})
            value = invariant(new)
            if value != report.baseline:
                trace.after = value
                report.violations.append({
                    "trial": trial,
                    "moves": trace.moves,
                    "expected": report.baseline,
                    "got": value,
                    "before": dumps_curve(cur).strip(),
                    "after": dumps_curve(new).strip(),
                })
                break
            cur = new
    return report
