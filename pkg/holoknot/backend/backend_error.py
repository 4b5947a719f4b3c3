from holoknot.core.core_error import InputError


class NoBackendFoundError(InputError):
    """This error is raised if a summation or quadrature backend is requested by a name
    no module implements"""
