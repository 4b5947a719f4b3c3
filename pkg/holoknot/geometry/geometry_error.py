from holoknot.core.core_error import NumericalError


class GeometryError(NumericalError):
    """Base class of the segment equation and critical point errors"""


class DegenerateShapeError(GeometryError):
    """Raised when a shape parameter hits 0, 1 or infinity"""

    def __init__(self, description, crossing=None, corner=None):
        super().__init__(description)
        self.crossing = crossing
        self.corner = corner


class ConvergenceError(GeometryError):
    """Raised when a nonlinear solve does not reach its residual tolerance"""
