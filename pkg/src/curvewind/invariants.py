"""Winding-number invariants computed from signed double points."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import curves
from .curves import CurveOnSurface, DoublePointEvent, double_points, event_sign, loop_classes_at
from .errors import (
    MissingReference,
    NonOrientable,
    NonTrivialDifferential,
    NotConjugate,
    NotNullHomotopic,
    NotReversible,
    NullHomotopic,
    OrientationReversingHolonomy,
    ReversibleClass,
    WrongCase,
)
from .geometry import EUCLID, turning_degree
from .groups import DeckElement

NULL_HOMOTOPIC = "null_homotopic"
ORIENTABLE = "orientable"
OR_REVERSING = "or_reversing"
OP_REVERSIBLE = "op_reversible"
OP_NONREVERSIBLE = "op_nonreversible"


@dataclass
class InvariantReport:
    case: str
    value: int
    i_cover_raw: Optional[int]
    d0_count: int
    dpm_count: int
    reference: Optional[str] = None
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "value": self.value,
            "i_cover_raw": self.i_cover_raw,
            "d0_count": self.d0_count,
            "dpm_count": self.dpm_count,
            "reference": self.reference,
            "diagnostics": list(self.diagnostics),
        }


def sign_of_event(c: CurveOnSurface, e: DoublePointEvent) -> int:
    return event_sign(c, e)


def detect_case(c: CurveOnSurface) -> str:
    T0 = c.holonomy
    if T0.is_identity:
        return NULL_HOMOTOPIC
    if c.model.orientable:
        return ORIENTABLE
    if c.model.w(T0) == -1:
        return OR_REVERSING
    return OP_REVERSIBLE if c.model.is_reversible(T0)[0] else OP_NONREVERSIBLE


def _signed_sum(c: CurveOnSurface, events) -> int:
    return sum(event_sign(c, e) for e in events if e.j is not None)


def _counts(events):
    d0 = sum(1 for e in events if e.j is None)
    return d0, len(events) - d0


def i_cover(c: CurveOnSurface) -> int:
    """Signed count of cover self-intersections, one per double point of the curve."""
    if c.holonomy.is_identity:
        raise NullHomotopic("the trivial class has no cover of this kind")
    if c.model.w(c.holonomy) != 1:
        raise OrientationReversingHolonomy(f"holonomy {c.holonomy} reverses orientation")
    return _signed_sum(c, double_points(c))


def invariant_orientable(c: CurveOnSurface) -> int:
    if not c.model.orientable:
        raise WrongCase(f"{c.model.kind} is not orientable")
    if c.holonomy.is_identity:
        raise NullHomotopic("use whitney_index_nullhomotopic")
    return i_cover(c)


def invariant_or_reversing(c: CurveOnSurface) -> int:
    """Parity of the number of cover self-intersection classes (values in Z/2)."""
    if c.model.orientable or c.model.w(c.holonomy) != -1:
        raise WrongCase("needs an orientation-reversing curve on a non-orientable surface")
    return _signed_sum(c, double_points(c)) % 2


def invariant_op_reversible(c: CurveOnSurface) -> int:
    if c.model.orientable or c.holonomy.is_identity or c.model.w(c.holonomy) != 1:
        raise WrongCase("needs an orientation-preserving essential curve on a non-orientable surface")
    if not c.model.is_reversible(c.holonomy)[0]:
        raise NotReversible(f"{c.holonomy} is not reversible")
    return abs(i_cover(c))


def normalize_cover(c: CurveOnSurface, ref_holonomy: DeckElement, bound: int = 4) -> CurveOnSurface:
    S = c.model.conjugator_search(ref_holonomy, c.holonomy, bound)
    if S is None:
        raise NotConjugate(f"{c.holonomy} is not conjugate to {ref_holonomy}")
    return curves.change_cover(c, S)


def invariant_op_nonreversible(c: CurveOnSurface, ref_holonomy: DeckElement) -> int:
    """i_cover after moving the cover so its holonomy is ``ref_holonomy``.

    Two conjugators differ by a centralizer element, and for a non-reversible
    class those all preserve orientation, so the value does not depend on
    which conjugator is used.
    """
    if c.model.orientable or c.holonomy.is_identity or c.model.w(c.holonomy) != 1:
        raise WrongCase("needs an orientation-preserving essential curve on a non-orientable surface")
    if c.model.is_reversible(c.holonomy)[0]:
        raise ReversibleClass(f"{c.holonomy} is reversible; use invariant_op_reversible")
    return i_cover(normalize_cover(c, ref_holonomy))


def canonical_reference(c: CurveOnSurface) -> DeckElement:
    """Holonomy of the canonical lift of the geodesic in the class of c."""
    if c.model.kind == "klein":
        m, n = c.holonomy.payload
        if m % 2 == 0:
            return c.model.element((m, abs(n)))
    return c.holonomy


def _zero_class(c: CurveOnSurface, g: DeckElement, homology: bool) -> bool:
    if homology:
        return all(x == 0 for x in c.model.homology_class(g))
    return g.is_identity


def _left_right_count(c: CurveOnSurface, homology: bool) -> int:
    total = 0
    for e in double_points(c):
        g1, g2, left_first = loop_classes_at(c, e)
        left, right = (g1, g2) if left_first else (g2, g1)
        total += int(_zero_class(c, left, homology)) - int(_zero_class(c, right, homology))
    return total


def tanio_kobayashi_t(c: CurveOnSurface) -> int:
    """Left-returning loops trivial in homology, minus right-returning ones."""
    if not c.model.orientable:
        raise NonOrientable("defined for orientable surfaces only")
    if c.holonomy.is_identity:
        raise NullHomotopic("defined for essential curves")
    return _left_right_count(c, homology=True)


def pi1_I(c: CurveOnSurface) -> int:
    """As tanio_kobayashi_t with null-homotopy in place of vanishing homology class."""
    if c.holonomy.is_identity:
        raise NullHomotopic("defined for essential curves")
    return _left_right_count(c, homology=False)


def _closed_lift_directions(c: CurveOnSurface) -> list:
    # start and end tangent of every arc, so that hyperbolic arcs contribute their own turning
    dirs = []
    for arc in c.arcs:
        dirs.append(arc.tangent_at(0.0))
        if c.kernel != EUCLID:
            dirs.append(arc.tangent_at(1.0))
    return dirs


def whitney_index_nullhomotopic(c: CurveOnSurface) -> int:
    if not c.holonomy.is_identity:
        raise NotNullHomotopic(f"holonomy {c.holonomy} is not trivial")
    double_points(c)  # genericity gate
    w = turning_degree(_closed_lift_directions(c))
    return w if c.model.orientable else abs(w)


def direction_degree_oracle(c: CurveOnSurface) -> int:
    """Rotation number of the cover's tangent over one period."""
    if c.kernel != EUCLID:
        raise NonTrivialDifferential("only Euclidean surfaces are supported")
    probe = c.model.apply_vector(c.holonomy, c.vertices[0], (0.6, 0.8))
    if abs(probe[0] - 0.6) > 1e-12 or abs(probe[1] - 0.8) > 1e-12:
        raise NonTrivialDifferential(f"holonomy {c.holonomy} acts non-trivially on directions")
    return turning_degree([a.tangent_at(0.0) for a in c.arcs])


def j_diagnostics(c: CurveOnSurface, events) -> list:
    """Events where the cover criterion and the null-loop criterion disagree."""
    out = []
    for e in events:
        if e.j is not None and e.j not in (0, 1):
            out.append(f"event s={e.s:.9f} t={e.t:.9f} has T = T0^{e.j}: a cover double point "
                       "whose loops are both essential")
    return out


def compute_invariants(c: CurveOnSurface, ref: Optional[DeckElement] = None) -> InvariantReport:
    """Detect the case from the holonomy and evaluate the matching invariant."""
    case = detect_case(c)
    events = double_points(c)
    d0, dpm = _counts(events)
    diags = j_diagnostics(c, events) if case != NULL_HOMOTOPIC else []
    if case == NULL_HOMOTOPIC:
        return InvariantReport(case, whitney_index_nullhomotopic(c), None, d0, dpm)
    raw = _signed_sum(c, events)
    if case == ORIENTABLE:
        return InvariantReport(case, raw, raw, d0, dpm, diagnostics=diags)
    if case == OR_REVERSING:
        return InvariantReport(case, raw % 2, raw, d0, dpm, diagnostics=diags)
    if case == OP_REVERSIBLE:
        return InvariantReport(case, abs(raw), raw, d0, dpm, diagnostics=diags)
    if ref is None:
        raise MissingReference(f"holonomy {c.holonomy} is orientation preserving and not reversible; "
                               "a reference holonomy is required")
    return InvariantReport(case, invariant_op_nonreversible(c, ref), raw, d0, dpm,
                           reference=str(ref), diagnostics=diags)


def invariant_value(c: CurveOnSurface, ref: Optional[DeckElement] = None) -> int:
    return compute_invariants(c, ref).value
