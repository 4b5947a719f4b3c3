"""The state sum Z_N = N^{-(E+1)/2} sum over n in [N]^E of exp(N A((beta + n) / N)).

The summand is a product of one factor per crossing, each depending on the
internal segments at that crossing only. Those factors become tensors with
one axis of size N per segment, and the sum is their full contraction.
"""
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from holoknot.action.action_error import SingularTermError
from holoknot.action.builder import build_quantum_action
from holoknot.action.evaluate import exp_N_action_array
from holoknot.action.symbolic import SignConvention, SymbolicAction
from holoknot.backend.backend import StateNetwork, SumBackend
from holoknot.backend.registry import get_sum_backend
from holoknot.core.config import Tolerances
from holoknot.diagram.diagram import OpenDiagram
from holoknot.quantize.log_coloring import LogColoring
from holoknot.quantize.quantize_error import PoleProximityError

logger = logging.getLogger(__name__)


@dataclass
class StateSumResult:
    value: complex
    N: int
    terms: int
    error_bound: float
    strategy: dict
    diagnostics: dict = field(default_factory=dict)

    @property
    def raw_value(self) -> complex:
        """The sum before the N^{-(E+1)/2} prefactor."""
        return self.value / self.diagnostics['prefactor']


def quantum_action(D: OpenDiagram, lc: LogColoring, N: int, sign_convention=SignConvention.RULE,
                   tolerances: Tolerances = None) -> SymbolicAction:
    action = build_quantum_action(D, lc.mu, N, sign_convention)
    if tolerances is not None:
        action.context().singular_distance = tolerances.singular_distance
    return action


def crossing_segments(action: SymbolicAction, crossing_id: str):
    """Internal segments the terms of one crossing depend on, in diagram order."""
    used = set()
    for term in action.crossing_terms(crossing_id):
        form = term.arg if term.is_dilog else term.linear
        used.update(segment for segment, coefficient in form.coefficients if coefficient != 0)
    return tuple(segment for segment in action.variables if segment in used)


def _pole_error(error: SingularTermError, where):
    return PoleProximityError('{0}: {1}'.format(where, error), error.term, error.distance)


def crossing_tensor(action: SymbolicAction, lc: LogColoring, crossing_id: str):
    N = action.N
    segments = crossing_segments(action, crossing_id)
    values = {}
    for axis, segment in enumerate(segments):
        shape = [1] * len(segments)
        shape[axis] = N
        values[segment] = ((lc.beta[lc.index(segment)] + np.arange(N)) / N).reshape(shape)
    try:
        tensor = exp_N_action_array(action, values, action.crossing_terms(crossing_id))
    except SingularTermError as error:
        raise _pole_error(error, 'crossing {0}'.format(crossing_id)) from error
    return segments, np.broadcast_to(np.asarray(tensor, dtype=complex), (N,) * len(segments))


def state_network(action: SymbolicAction, lc: LogColoring) -> StateNetwork:
    N = action.N
    tensors = [crossing_tensor(action, lc, crossing.id) for crossing in action.diagram.crossings]

    def summand(n):
        try:
            return exp_N_action_array(action, action.values(lc.values(n, N)))
        except SingularTermError as error:
            raise _pole_error(error, 'lattice point') from error

    return StateNetwork(action.variables, N, tensors, summand)


def state_sum(D: OpenDiagram, lc: LogColoring, N: int, backend='tensor_network',
              sign_convention=SignConvention.RULE, tolerances: Tolerances = None,
              action: SymbolicAction = None) -> StateSumResult:
    """Z_N of the log coloring ``lc``.

    ``backend`` is a :class:`SumBackend` or a registered backend name.

    :raises PinchedColoringError: when ``lc`` is pinched.
    :raises PoleProximityError: when a lattice argument hits a pole or zero.
    """
    lc.require_unpinched()
    if isinstance(backend, str):
        backend = get_sum_backend(backend)
    action = action or quantum_action(D, lc, N, sign_convention, tolerances)

    started = time.perf_counter()
    network = state_network(action, lc)
    raw, bound = backend.evaluate(network)
    prefactor = float(N) ** (-(len(D.E) + 1) / 2.0)
    elapsed = time.perf_counter() - started

    logger.info('%s: Z_%d = %s (%s, %d terms, %.2fs)', D.name, N, raw * prefactor,
                backend.name, network.terms, elapsed)
    return StateSumResult(raw * prefactor, N, network.terms, bound * prefactor, backend.describe(),
                          {'prefactor': prefactor, 'mu': lc.mu, 'elapsed': elapsed,
                           'tensor_shapes': [list(indices) for indices, _ in network.tensors]})
