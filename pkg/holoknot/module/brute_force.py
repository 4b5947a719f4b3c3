import logging

import numpy as np

from holoknot.backend.backend import StateNetwork, SumBackend
from holoknot.quantize.quantize_error import NodeBudgetError, QuantizeError
from lib.numeric import tree_sum

logger = logging.getLogger(__name__)


class BruteForceBackend(SumBackend):
    """Direct enumeration of all N^E lattice points, in chunks."""

    name = 'brute_force'

    def __init__(self, max_terms=10 ** 6, chunk=1 << 14):
        self.max_terms = int(max_terms)
        self.chunk = int(chunk)

    def evaluate(self, network: StateNetwork):
        if network.summand is None:
            raise QuantizeError('brute force summation needs a direct summand')
        total = network.terms
        if total > self.max_terms:
            raise NodeBudgetError('{0} terms exceed the brute force limit {1}'.format(
                total, self.max_terms))

        shape = (network.N,) * len(network.segments)
        partial, bounds = [], []
        for start in range(0, total, self.chunk):
            flat = np.arange(start, min(start + self.chunk, total))
            n = np.stack(np.unravel_index(flat, shape), axis=-1) if shape else np.zeros((1, 0), int)
            value, bound = tree_sum(network.summand(n))
            partial.append(value)
            bounds.append(bound)
        value, bound = tree_sum(partial)
        logger.debug('brute force over %d terms in %d chunks', total, len(partial))
        return value, bound + float(np.sum(bounds))

    def describe(self):
        return {'backend': self.name, 'chunk': self.chunk}
