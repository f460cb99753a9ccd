from collections import Counter

import numpy as np
import pytest

from curvewind.curves import CurveOnSurface, double_points, event_counter, event_sign, geodesic_representative, perturb
from curvewind.errors import NoNearbyStrand, TooCrowded
from curvewind.groups import KLEIN, SANOV, TORUS
from curvewind.homotopy import (
    add_kinks,
    build_w_k_curve,
    finger_move,
    invariance_suite,
    kink_pair,
    random_move,
    retract,
)
from curvewind.invariants import compute_invariants, detect_case, OP_NONREVERSIBLE

from conftest import curve_zoo, finger_of_family

K, Tz, W = KLEIN.element, TORUS.element, SANOV.parse


MEANDER = ((0, 0), (0.8, 0), (0.9, 0.1), (0.8, 0.2), (0.2, 0.2), (0.1, 0.3), (0.2, 0.4), (0.9, 0.4))


def value(c, ref=None):
    if ref is None and detect_case(c) == OP_NONREVERSIBLE:
        ref = c.holonomy
    return compute_invariants(c, ref).value


def base_curve():
    return perturb(geodesic_representative(TORUS, Tz((1, 0)), 6), 0.02, 1, relative=True)


def test_finger_across_own_strand():
    # an S-shaped meander, so that the nearest strand is often on the same cover
    c = CurveOnSurface(TORUS, Tz((1, 0)), MEANDER)
    fr = finger_of_family(c, "Dpm")
    assert [e.kind for e in fr.events] == ["Dpm", "Dpm"]
    assert sorted(fr.signs) == [-1, 1]
    assert value(fr.curve) == value(c)


def test_finger_across_translate():
    c = base_curve()
    fr = finger_of_family(c, "D0")
    assert [e.kind for e in fr.events] == ["D0", "D0"]
    assert c.model.cyclic_power(fr.events[0].T, c.holonomy) is None
    assert value(fr.curve) == value(c)


def test_retract_restores_events():
    for c in curve_zoo()[:8]:
        fr = finger_of_family(c, "D0", seed=2) if c.kernel == "euclid" else None
        if fr is None:
            continue
        back = retract(fr.curve, fr.index)
        assert back == c
        assert event_counter(double_points(back)) == event_counter(double_points(c))


def test_finger_errors():
    c = base_curve()
    with pytest.raises(NoNearbyStrand):
        finger_move(c, 0.5 / c.N, 0.001, 1, reach=1e-3)
    kinked = add_kinks(c, 1)
    e = double_points(kinked)[0]
    with pytest.raises(TooCrowded):
        finger_move(kinked, e.s + 1e-9, 1e-3)


def test_kink_pair_preserves_value():
    c = base_curve()
    d = kink_pair(c, 0.5 / c.N, 2.5 / c.N, 0.01)
    assert Counter(event_sign(d, e) for e in double_points(d)) == Counter({1: 1, -1: 1})
    assert value(d) == value(c)


@pytest.mark.parametrize("model,hol,k,expected", [
    (TORUS, (1, 0), 4, 4),
    (KLEIN, (1, 0), 3, 1),
    (SANOV, "a", -2, -2),
    (KLEIN, (2, 0), -3, 3),
    (KLEIN, (0, 1), -2, -2),
    (SANOV, "ab", 2, 2),
])
def test_build_w_k_examples(model, hol, k, expected):
    T0 = model.parse(hol) if isinstance(hol, str) else model.element(hol)
    c = build_w_k_curve(model, T0, k)
    assert value(c, T0 if detect_case(c) == OP_NONREVERSIBLE else None) == expected


def test_build_w_k_is_identity_on_k():
    for k in range(-5, 6):
        assert value(build_w_k_curve(TORUS, Tz((2, 1)), k)) == k
        assert value(build_w_k_curve(KLEIN, K((1, 1)), k)) == k % 2
        assert value(build_w_k_curve(KLEIN, K((2, 0)), k)) == abs(k)
        assert value(build_w_k_curve(KLEIN, K((0, 1)), k)) == k
        assert value(build_w_k_curve(SANOV, W("ab"), k)) == k


def test_build_w_k_is_deterministic():
    assert build_w_k_curve(TORUS, Tz((1, 2)), 2, seed=4) == build_w_k_curve(TORUS, Tz((1, 2)), 2, seed=4)


def test_random_move_is_seeded():
    c = base_curve()
    a = random_move(c, np.random.default_rng(9))
    b = random_move(c, np.random.default_rng(9))
    assert a[0] == b[0] and a[1] == b[1]


def test_suite_torus():
    rep = invariance_suite(add_kinks(base_curve(), 2), trials=100, seed=1)
    assert rep.ok and rep.baseline == 2 and rep.trials == 100
    assert rep.moves_applied > 250


def test_suite_klein_reversible():
    c = build_w_k_curve(KLEIN, K((2, 0)), 2)
    rep = invariance_suite(c, trials=100, seed=2)
    assert rep.ok and rep.baseline == 2


def test_suite_negative_control():
    # dropping the signs turns the invariant into a count, which kink pairs change
    c = build_w_k_curve(TORUS, Tz((1, 0)), 1)
    broken = lambda x: sum(abs(event_sign(x, e)) for e in double_points(x))  # noqa: E731
    rep = invariance_suite(c, trials=30, seed=3, invariant=broken)
    assert not rep.ok and rep.violations
    v = rep.violations[0]
    assert '"surface": "torus"' in v["before"] and '"surface": "torus"' in v["after"]


def test_suite_report_json():
    rep = invariance_suite(build_w_k_curve(KLEIN, K((1, 0)), 1), trials=3, seed=0)
    d = rep.to_json()
    assert d["case"] == "or_reversing" and d["ok"] is True and d["trials"] == 3
