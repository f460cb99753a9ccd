"""Whitney-type winding numbers of curves on the torus, the Klein bottle and a
hyperbolic surface, computed from signed double points in the universal cover."""
from .curves import (
    CurveOnSurface,
    DoublePointEvent,
    GenericityReport,
    add_kink,
    change_cover,
    double_points,
    dumps_curve,
    event_sign,
    geodesic_representative,
    horocycle_representative,
    load_curve,
    loads_curve,
    perturb,
    save_curve,
    validate_generic,
)
from .errors import CurvewindError, MalformedCurve, NonGeneric, UnsupportedCase
from .groups import KLEIN, MODELS, SANOV, TORUS, DeckElement
from .homotopy import birth_death_pair, build_w_k_curve, invariance_suite
from .invariants import (
    InvariantReport,
    compute_invariants,
    detect_case,
    direction_degree_oracle,
    invariant_op_nonreversible,
    invariant_op_reversible,
    invariant_or_reversing,
    invariant_orientable,
    pi1_I,
    tanio_kobayashi_t,
    whitney_index_nullhomotopic,
)

__version__ = "0.1.0"
