from holoknot.core.core_error import InputError, NumericalError


class QuantizeError(NumericalError):
    """Base class of state sum and state integral errors"""


class PinchedColoringError(InputError, QuantizeError):
    """Raised when the coloring is pinched at some crossing"""

    def __init__(self, crossings):
        super().__init__('coloring is pinched at {0}'.format(', '.join(crossings)))
        self.crossings = tuple(crossings)


class PoleProximityError(QuantizeError):
    """Raised when a dilogarithm argument comes within the singular distance of a pole or zero"""

    def __init__(self, description, term=None, distance=None):
        super().__init__(description)
        self.term = term
        self.distance = distance


class NodeBudgetError(QuantizeError):
    """Raised when a sum or quadrature needs more nodes than it is allowed"""
