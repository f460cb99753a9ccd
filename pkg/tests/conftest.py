import math
import random

import pytest

from curvewind.errors import NonGeneric
from curvewind.geometry import planar_crossings, polyline_directions, turning_degree

ACCEPTANCE = {}


def record(number: int, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[number] = (ok, detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_polyline(rng: random.Random, n=None):
    """A random closed planar polyline that passes the genericity checks."""
    while True:
        k = n or rng.randint(4, 12)
        pts = [(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(k)]
        try:
            planar_crossings(pts)
            turning_degree(polyline_directions(pts))
        except (NonGeneric, ValueError, ArithmeticError):
            continue
        if min(math.dist(pts[i], pts[i - 1]) for i in range(k)) < 1e-3:
            continue
        return pts


_ZOO = []


def curve_zoo():
    """Generic curves of every case, with and without extra double points."""
    if _ZOO:
        return _ZOO
    from curvewind.groups import KLEIN, SANOV, TORUS
    from curvewind.homotopy import build_w_k_curve, finger_move
    from curvewind.errors import CurvewindError

    starts = [(TORUS, (1, 0), 2), (TORUS, (2, 3), -1), (TORUS, (1, -2), 0), (KLEIN, (1, 0), 3),
             (KLEIN, (1, 2), 1), (KLEIN, (2, 0), -2), (KLEIN, (0, 1), 2), (KLEIN, (2, 1), -1),
             (SANOV, "ab", 1), (SANOV, "a", -1), (SANOV, "b", 2)]
    rng = random.Random(3)
    for model, hol, k in starts:
        T0 = model.parse(hol) if isinstance(hol, str) else model.element(hol)
        c = build_w_k_curve(model, T0, k, seed=1)
        _ZOO.append(c)
        for _ in range(40):
            try:
                at = rng.random()
                i, _f = c.locate(at)
                _ZOO.append(finger_move(c, at, 0.15 * c.arcs[i].length(), rng.choice((1, -1))).curve)
                break
            except CurvewindError:
                continue
    return _ZOO


def finger_of_family(c, family, seed=0, tries=200):
    """Push fingers from random spots of c until one creates a pair of the given family."""
    from curvewind.errors import CurvewindError
    from curvewind.homotopy import finger_move

    rng = random.Random(seed)
    for _ in range(tries):
        at = rng.random()
        i, _f = c.locate(at)
        try:
            fr = finger_move(c, at, 0.15 * c.arcs[i].length(), rng.choice((1, -1)))
        except CurvewindError:
            continue
        if fr.family == family:
            return fr
    raise LookupError(f"no {family} finger found")
