from holoknot.core.core_error import InputError, NumericalError


class ActionError(NumericalError):
    """Base class of action construction and evaluation errors"""


class SingularTermError(ActionError):
    """Raised when a dilogarithm term of the action is evaluated at a pole or zero"""

    def __init__(self, term, argument, distance):
        super().__init__('term {0} is singular at argument {1} (distance {2:.3g})'.format(
            term, argument, distance))
        self.term = term
        self.argument = argument
        self.distance = distance


class OmegaDomainError(InputError, ActionError):
    """Raised when a classical argument lies on the cut (-inf, 0] u [1, inf)"""

    def __init__(self, term, argument):
        super().__init__('t is outside the domain of the classical action: term {0} '
                         'has argument {1}'.format(term, argument))
        self.term = term
        self.argument = argument
