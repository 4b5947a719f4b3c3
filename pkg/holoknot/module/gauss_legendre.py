import numpy as np
from scipy.special import roots_legendre

from holoknot.backend.backend import QuadratureBackend
from holoknot.core.config import QuadratureSettings


def legendre_unit(nodes):
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = roots_legendre(nodes)
    return 0.5 * (x + 1.0), 0.5 * w


def tensor_rule(dim, nodes):
    x, w = legendre_unit(nodes)
    grids = np.meshgrid(*([x] * dim), indexing='ij')
    weights = np.ones(1)
    for _ in range(dim):
        weights = np.multiply.outer(weights, w).ravel()
    return np.stack([g.ravel() for g in grids], axis=-1), weights.ravel()


class GaussLegendreBackend(QuadratureBackend):
    """Tensor product Gauss-Legendre rule; the error is the difference to the
    rule with one node fewer per axis."""

    name = 'gauss'

    def __init__(self, gauss_nodes=QuadratureSettings.gauss_nodes.default):
        self.gauss_nodes = int(gauss_nodes)

    @classmethod
    def from_settings(cls, settings: QuadratureSettings):
        return cls(settings.gauss_nodes)

    def nodes(self, dim, budget, rng=None):
        per_axis = min(self.gauss_nodes, int(np.floor(max(budget, 1) ** (1.0 / max(dim, 1)) + 1e-9)))
        per_axis = max(per_axis, 3)
        return [tensor_rule(dim, per_axis), tensor_rule(dim, per_axis - 1)]

    def estimate(self, values):
        fine, coarse = complex(values[0]), complex(values[1])
        return fine, abs(fine - coarse)
