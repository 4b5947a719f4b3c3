"""State integrals I_k = int over [0, 1]^E of exp(N (A(beta/N + t) - 2 pi i k.t)) dt.

Every dilog term of the action has argument offset + sum c_j t_j with integer
c_j, so along the real cube it only sees a real interval past a fixed
complex offset. Its e^{phi_N} values come from one interpolation table per
term, built before any quadrature node is evaluated.
"""
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from holoknot.action.evaluate import exp_N_action_array
from holoknot.action.symbolic import SignConvention, SymbolicAction
from holoknot.backend.backend import QuadratureBackend
from holoknot.backend.registry import get_quadrature_backend
from holoknot.core.config import CACHE_DIR_ENV, QuadratureSettings, Tolerances
from holoknot.core.signals import Signal
from holoknot.diagram.diagram import OpenDiagram
from holoknot.dilog.dilog_error import DilogError
from holoknot.dilog.table import TableCache
from holoknot.quantize.log_coloring import LogColoring
from holoknot.quantize.poles import contour_distance
from holoknot.quantize.quantize_error import NodeBudgetError, PoleProximityError, QuantizeError
from holoknot.quantize.state_sum import quantum_action
from lib.numeric import tree_sum

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi

# slack on table windows for rounding in (argument - offset).real
_WINDOW_PAD = 1e-9


@dataclass
class StateIntegralResult:
    k: np.ndarray
    value: complex
    error_estimate: float
    nodes: int
    diagnostics: dict = field(default_factory=dict)


def default_cache(settings: QuadratureSettings, tolerances: Tolerances) -> TableCache:
    return TableCache(os.environ.get(CACHE_DIR_ENV) or None, settings.table_nodes,
                      tolerances.interpolation)


class TableEvaluator:
    """e^{phi_N} of every dilog term along base + t, t_j in [0, 1] for the
    ``moving`` segments and 0 for the others."""

    def __init__(self, action: SymbolicAction, base: dict, moving: Sequence[str], cache: TableCache,
                 singular_distance=Tolerances.singular_distance.default):
        self.action = action
        self.moving = tuple(moving)
        self.min_distance = np.inf
        self._tables = {}
        N = action.N
        for term in action.dilog_terms:
            offset = complex(term.arg.evaluate(base))
            coefficients = [c for segment, c in term.arg.coefficients if segment in self.moving]
            window = (sum(c for c in coefficients if c < 0) - _WINDOW_PAD,
                      sum(c for c in coefficients if c > 0) + _WINDOW_PAD)
            distance = contour_distance(N, offset, window)
            if distance < singular_distance:
                raise PoleProximityError('term {0} passes {1:.3g} from a pole on the contour'.format(
                    term.label(), distance), term.label(), distance)
            self.min_distance = min(self.min_distance, distance)
            try:
                table = cache.get(action.context(), offset, window)
            except DilogError as error:
                raise QuantizeError('no table for term {0}: {1}'.format(term.label(), error)) from error
            self._tables[id(term)] = (offset, table)

    def __call__(self, term, argument):
        offset, table = self._tables[id(term)]
        return table((np.asarray(argument) - offset).real)

    def __len__(self):
        return len(self._tables)


class StateIntegrator:
    """Quadrature of exp(N A(beta/N + t)) against weights on [0, 1]^E.

    The values of the action factor on each rule are computed once and
    shared by every weight function, so many I_k, or kernel weighted sums of
    them, cost one set of action evaluations. ``pre_rule``, ``post_rule``
    and ``error_rule`` are emitted per quadrature rule (one per random shift
    for lattice rules).
    """

    def __init__(self, D: OpenDiagram, lc: LogColoring, N: int, settings: QuadratureSettings = None,
                 tolerances: Tolerances = None, cache: TableCache = None, backend=None, threads=1,
                 sign_convention=SignConvention.RULE):
        lc.require_unpinched()
        self.D = D
        self.lc = lc
        self.N = int(N)
        self.settings = settings or QuadratureSettings()
        self.tolerances = tolerances or Tolerances()
        self.threads = max(1, int(threads))
        self.action = quantum_action(D, lc, N, sign_convention, self.tolerances)

        if backend is None:
            backend = self.settings.rule
        if isinstance(backend, str):
            backend = get_quadrature_backend(backend, len(D.E), self.settings)
        self.backend: QuadratureBackend = backend

        self.pre_rule = Signal()
        self.post_rule = Signal()
        self.error_rule = Signal()

        started = time.perf_counter()
        self.cache = cache or default_cache(self.settings, self.tolerances)
        self.base = lc.beta / self.N
        self.evaluator = TableEvaluator(self.action, self.action.values(self.base), D.E, self.cache,
                                        self.tolerances.singular_distance)
        logger.info('%s N=%d: %d tables ready in %.2fs, contour distance %.3g', D.name, N,
                    len(self.evaluator), time.perf_counter() - started, self.evaluator.min_distance)

    @property
    def dim(self) -> int:
        return len(self.D.E)

    def integrand(self, points) -> np.ndarray:
        """exp(N A(beta/N + t)) at points of shape (M, E)."""
        values = self.action.values(self.base + np.asarray(points))
        return exp_N_action_array(self.action, values, evaluator=self.evaluator)

    def _apply_rule(self, index, rule, weight_functions):
        points, weights = rule
        self.pre_rule.emit(index, len(weights))
        try:
            f = weights * self.integrand(points)
            sums = [tree_sum(f * weight(points))[0] for weight in weight_functions]
        except Exception as error:
            self.error_rule.emit(index, error)
            raise
        self.post_rule.emit(index, sums)
        return sums

    def integrate_weighted(self, weight_functions: Sequence[Callable], budget: int,
                           rng: np.random.Generator):
        """(value, error) of int f(t) w(t) dt for every weight w."""
        rules = self.backend.nodes(self.dim, budget, rng)
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                per_rule = list(executor.map(lambda item: self._apply_rule(item[0], item[1], weight_functions),
                                             enumerate(rules)))
        else:
            per_rule = [self._apply_rule(index, rule, weight_functions) for index, rule in enumerate(rules)]
        nodes = int(sum(len(weights) for _, weights in rules))
        estimates = [self.backend.estimate([sums[j] for sums in per_rule])
                     for j in range(len(weight_functions))]
        return estimates, nodes

    def integrate(self, k, budget: Optional[int] = None, rng: Optional[np.random.Generator] = None,
                  refine=True) -> StateIntegralResult:
        """I_k, doubling the node budget until two successive values agree
        within their combined error estimates.

        :raises NodeBudgetError: when max_refinements doublings do not settle.
        """
        k = np.asarray(k, dtype=int).reshape(self.dim)
        rng = rng if rng is not None else np.random.default_rng(0)
        budget = int(budget or self.settings.qmc_points)
        twist = twist_weight(k, self.N)

        started = time.perf_counter()
        [(value, error)], nodes = self.integrate_weighted([twist], budget, rng)
        history = [(nodes, value, error)]
        if refine:
            for _ in range(self.settings.max_refinements):
                budget *= 2
                [(finer, finer_error)], nodes = self.integrate_weighted([twist], budget, rng)
                history.append((nodes, finer, finer_error))
                change = abs(finer - value)
                value, error = finer, max(finer_error, change)
                if change <= 4.0 * (finer_error + history[-2][2]) or \
                        change <= self.tolerances.quadrature * max(abs(finer), 1e-300):
                    break
            else:
                raise NodeBudgetError('I_k for k={0} did not settle after {1} doublings '
                                      '(last change {2:.3g})'.format(k.tolist(), self.settings.max_refinements,
                                                                     abs(history[-1][1] - history[-2][1])))

        elapsed = time.perf_counter() - started
        logger.info('%s N=%d k=%s: I = %s +- %.3g (%d nodes, %.2fs)', self.D.name, self.N, k.tolist(),
                    value, error, nodes, elapsed)
        return StateIntegralResult(k, value, error, nodes, {
            'backend': self.backend.name,
            'contour_distance': self.evaluator.min_distance,
            'history': [[n, v, e] for n, v, e in history],
            'elapsed': elapsed,
        })


def twist_weight(k, N):
    k = np.asarray(k, dtype=float)

    def weight(points):
        return np.exp(-TWO_PI_I * N * (np.asarray(points) @ k))

    return weight


def state_integral(D: OpenDiagram, lc: LogColoring, N: int, k, quad: QuadratureSettings = None,
                   rng: Optional[np.random.Generator] = None, budget: Optional[int] = None,
                   tolerances: Tolerances = None, backend=None, threads=1, refine=True,
                   cache: TableCache = None) -> StateIntegralResult:
    """I_k over the real unit cube.

    :raises PoleProximityError: when the contour passes a pole of some term.
    :raises NodeBudgetError: when refinement does not settle.
    """
    integrator = StateIntegrator(D, lc, N, quad, tolerances, cache, backend, threads)
    return integrator.integrate(k, budget, rng, refine)
