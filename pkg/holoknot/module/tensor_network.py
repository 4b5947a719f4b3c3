"""Einsum contraction of the crossing tensors.

Every internal segment is one index of dimension N shared by the crossings
at its two ends, so the full sum is a closed tensor network.
"""
import logging

import numpy as np

from holoknot.backend.backend import StateNetwork, SumBackend
from holoknot.quantize.quantize_error import QuantizeError

logger = logging.getLogger(__name__)


class TensorNetworkBackend(SumBackend):
    name = 'tensor_network'

    def __init__(self, strategy='greedy'):
        if strategy not in ('greedy', 'optimal'):
            raise QuantizeError('unknown contraction strategy {0!r}'.format(strategy))
        self.strategy = strategy
        self.last_path = None

    def _operands(self, network: StateNetwork, arrays):
        label = {segment: i for i, segment in enumerate(network.segments)}
        operands = []
        for (indices, _), array in zip(network.tensors, arrays):
            operands.extend([array, [label[segment] for segment in indices]])
        operands.append([])
        return operands

    def evaluate(self, network: StateNetwork):
        if not network.tensors:
            return 1.0 + 0j, 0.0
        arrays = [array for _, array in network.tensors]
        operands = self._operands(network, arrays)
        path, description = np.einsum_path(*operands, optimize=self.strategy)
        self.last_path = path
        logger.debug('contraction path for %d tensors:\n%s', len(arrays), description)

        value = complex(np.einsum(*operands, optimize=path))
        magnitude = float(np.real(np.einsum(*self._operands(network, [np.abs(a) for a in arrays]),
                                            optimize=path)))
        bound = np.finfo(float).eps * (len(network.segments) + len(arrays)) * magnitude
        return value, bound

    def describe(self):
        return {'backend': self.name, 'strategy': self.strategy,
                'path': [list(step) for step in self.last_path[1:]] if self.last_path else []}
