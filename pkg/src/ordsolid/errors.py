"""Exception hierarchy.

Every error raised on bad input or a violated hypothesis derives from
``GeometryError`` so the CLI can map it to exit code 2 in one place.
``IdentityViolation`` is the exception: it signals an internal bug.
"""


class GeometryError(ValueError):
    pass


class ZeroVector(GeometryError):
    pass


class MixedDimensions(GeometryError):
    pass


class DegenerateSpan(GeometryError):
    pass


class NotOnCurve(GeometryError):
    pass


class SingularCurve(GeometryError):
    pass


class NotTorsion(GeometryError):
    pass


class DegenerateConfig(GeometryError):
    pass


class GeneralPositionViolation(GeometryError):
    def __init__(self, msg, tuple_=None):
        super().__init__(msg)
        self.tuple = tuple_


class StructureViolation(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    def __init__(self, msg, dimension=None):
        super().__init__(msg)
        self.dimension = dimension


class ContainmentViolation(GeometryError):
    pass


class InstanceTooLarge(GeometryError):
    pass


class RetriesExhausted(GeometryError):
    pass


class IdentityViolation(AssertionError):
    """An exact counting identity failed; the arrangement code is wrong."""
