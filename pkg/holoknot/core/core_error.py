class HoloKnotError(Exception):
    """Base class of every error raised by holoknot.

    ``exit_code`` is the process exit code the command line front end uses
    when the error escapes a pipeline.
    """
    exit_code = 3


class InputError(HoloKnotError):
    """Raised when user supplied data (files, documents, options) is unusable"""
    exit_code = 2


class NumericalError(HoloKnotError):
    """Raised when a numerical procedure fails on valid input"""
    exit_code = 3


class ConfigError(InputError):
    """Raised when a configuration value is out of its documented range"""
