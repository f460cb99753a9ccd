"""Exception hierarchy.

Every error raised on purpose by the library derives from CurvewindError so
the CLI can map it to an exit code.
"""


class CurvewindError(Exception):
    pass


# geometry
class MixedKernels(CurvewindError):
    pass


class Parallel(CurvewindError):
    pass


class CuspTurn(CurvewindError):
    pass


class NonGeneric(CurvewindError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# groups
class MixedGroups(CurvewindError):
    pass


class IdentityHolonomy(CurvewindError):
    pass


class OrientableGroup(CurvewindError):
    pass


# curves
class MalformedCurve(CurvewindError):
    pass


class ParabolicHolonomy(CurvewindError):
    pass


class NotParabolic(CurvewindError):
    pass


class TooCrowded(CurvewindError):
    pass


class MarginExceeded(CurvewindError):
    pass


class NoNearbyStrand(CurvewindError):
    pass


# invariants
class UnsupportedCase(CurvewindError):
    """Base for errors where the curve does not fit the requested formula."""


class OrientationReversingHolonomy(UnsupportedCase):
    pass


class NullHomotopic(UnsupportedCase):
    pass


class NotNullHomotopic(UnsupportedCase):
    pass


class WrongCase(UnsupportedCase):
    pass


class NotReversible(UnsupportedCase):
    pass


class ReversibleClass(UnsupportedCase):
    pass


class NotConjugate(UnsupportedCase):
    pass


class NonOrientable(UnsupportedCase):
    pass


class NonTrivialDifferential(UnsupportedCase):
    pass


class MissingReference(UnsupportedCase):
    pass
