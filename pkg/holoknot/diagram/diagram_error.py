from holoknot.core.core_error import InputError


class DiagramError(InputError):
    """Raised when a diagram document does not describe a valid open knot diagram"""


class IncidenceError(DiagramError):
    """Raised when a segment is attached to the wrong number of crossing ends"""


class PlanarityError(DiagramError):
    """Raised when the rotation system does not embed the closed diagram in the sphere"""


class NotAKnotError(DiagramError):
    """Raised when the closure of the diagram has more than one component"""


class UnknownBuiltinError(DiagramError):
    """Raised when a builtin diagram name is not recognized"""
