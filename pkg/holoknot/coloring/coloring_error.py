from holoknot.core.core_error import InputError, NumericalError


class ColoringError(InputError):
    """Raised when a representation document or coloring is unusable"""


class CrossingRelationError(ColoringError):
    """Raised when the decorated matrices around a crossing violate the crossing relation"""

    def __init__(self, crossing, residual):
        super().__init__('crossing relation violated at {0} (residual {1:.3g})'.format(
            crossing, residual))
        self.crossing = crossing
        self.residual = residual


class ShadowClosureError(ColoringError):
    """Raised when the region vectors of a shadow coloring do not close up around a crossing"""


class GaugeError(ColoringError):
    """Raised when a gauge matrix is not in SL2"""


class InadmissibleError(ColoringError):
    """Raised when an operation needs an admissible shadow coloring and does not get one"""


class RepresentationSolveError(NumericalError):
    """Raised when the Wirtinger relations of a two generator representation cannot be solved"""
