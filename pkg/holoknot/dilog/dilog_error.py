from holoknot.core.core_error import NumericalError, InputError


class DilogError(NumericalError):
    """Base class of dilogarithm evaluation errors"""


class StripError(DilogError):
    """Raised when an argument of Phi_b lies outside the strip |Im z| < Im c_b"""


class QuadratureError(DilogError):
    """Raised when the contour quadrature of Phi_b does not settle"""


class SingularityError(DilogError):
    """Raised when e^phi_N is evaluated too close to one of its poles or zeros"""

    def __init__(self, argument, point, distance):
        super().__init__('argument {0} is {1:.3g} from the singular point {2}'.format(
            argument, distance, point))
        self.argument = argument
        self.point = point
        self.distance = distance


class BranchError(InputError, DilogError):
    """Raised when the classical function is evaluated on its cut (-inf, 0] u [1, inf)"""
