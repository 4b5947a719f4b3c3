from holoknot.core.core_error import InputError


class ReportError(InputError):
    """Raised when a report or fixture file cannot be written"""


class UnknownCommandError(InputError):
    """Raised when a config names a command the pipeline does not know"""
