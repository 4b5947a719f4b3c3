from holoknot.backend.backend import QuadratureBackend, SumBackend
from holoknot.backend.backend_error import NoBackendFoundError
from holoknot.core.config import QuadratureSettings


def _sum_backends():
    from holoknot.module.brute_force import BruteForceBackend
    from holoknot.module.tensor_network import TensorNetworkBackend
    return {'tensor_network': TensorNetworkBackend, 'brute_force': BruteForceBackend}


def _quadrature_backends():
    from holoknot.module.gauss_legendre import GaussLegendreBackend
    from holoknot.module.rank1_lattice import Rank1LatticeBackend
    return {'lattice': Rank1LatticeBackend, 'gauss': GaussLegendreBackend}


def get_sum_backend(name='tensor_network', **options) -> SumBackend:
    try:
        backend_class = _sum_backends()[name]
    except KeyError:
        raise NoBackendFoundError('no state sum backend named {0!r}'.format(name))
    return backend_class(**options)


def get_quadrature_backend(name='lattice', dim=None, settings: QuadratureSettings = None) -> QuadratureBackend:
    """``auto`` is the tensor Gauss-Legendre rule up to four dimensions and the
    lattice rule above."""
    if name == 'auto':
        name = 'gauss' if dim is not None and dim <= 4 else 'lattice'
    try:
        backend_class = _quadrature_backends()[name]
    except KeyError:
        raise NoBackendFoundError('no quadrature backend named {0!r}'.format(name))
    return backend_class.from_settings(settings or QuadratureSettings())
