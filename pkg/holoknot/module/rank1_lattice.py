"""Randomly shifted Korobov lattice rules on the unit cube.

The generating vector is z = (1, a, a^2, ...) mod n with the multiplier a
picked among a few candidates by the smallest P_2 worst-case error. Points
go through the tent (baker's) map, so non-periodic integrands keep second
order convergence.
"""
import functools
import logging

import numpy as np

from holoknot.backend.backend import QuadratureBackend
from holoknot.core.config import QuadratureSettings

logger = logging.getLogger(__name__)

_CANDIDATES = 32


def _bernoulli2(x):
    return x * x - x + 1.0 / 6.0


def p2_criterion(z, n) -> float:
    k = np.arange(n)[:, None]
    x = np.mod(k * np.asarray(z)[None, :], n) / n
    return float(np.mean(np.prod(1.0 + 2.0 * np.pi ** 2 * _bernoulli2(x), axis=1)) - 1.0)


@functools.lru_cache(maxsize=64)
def korobov_vector(n: int, dim: int) -> tuple:
    if dim == 1 or n <= 3:
        return tuple(1 for _ in range(dim))
    rng = np.random.default_rng(n * 131 + dim)
    candidates = np.unique(rng.integers(1, n // 2, _CANDIDATES) * 2 + 1)
    best, best_value = None, np.inf
    for a in candidates:
        z = [pow(int(a), j, n) for j in range(dim)]
        value = p2_criterion(z, n)
        if value < best_value:
            best, best_value = tuple(z), value
    logger.debug('korobov n=%d dim=%d: z=%s, P2=%.3g', n, dim, best, best_value)
    return best


class Rank1LatticeBackend(QuadratureBackend):
    name = 'lattice'

    def __init__(self, shifts=QuadratureSettings.qmc_shifts.default, baker=True):
        self.shifts = int(shifts)
        self.baker = baker

    @classmethod
    def from_settings(cls, settings: QuadratureSettings):
        return cls(settings.qmc_shifts)

    def nodes(self, dim, budget, rng):
        n = max(16, int(budget) // self.shifts)
        z = np.array(korobov_vector(n, dim), dtype=np.int64)
        base = np.mod(np.arange(n, dtype=np.int64)[:, None] * z[None, :], n) / n
        weights = np.full(n, 1.0 / n)
        rules = []
        for _ in range(self.shifts):
            points = np.mod(base + rng.random(dim)[None, :], 1.0)
            if self.baker:
                points = 1.0 - np.abs(2.0 * points - 1.0)
            rules.append((points, weights))
        return rules

    def estimate(self, values):
        values = np.asarray(values, dtype=complex)
        mean = complex(np.mean(values))
        spread = float(np.sqrt(np.sum(np.abs(values - mean) ** 2) / (len(values) - 1)))
        return mean, spread / np.sqrt(len(values))
