"""Z_N as a sum of state integrals, checked numerically.

The symmetric box sum over ||k||_inf <= K of I_k is the integral of f
against the product Dirichlet kernel prod D_K(N t_i), and its Cesaro mean
is the integral against the product Fejer kernel. Both are evaluated on one
shared set of quadrature nodes for every K.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import roots_legendre

from holoknot.action.action_error import SingularTermError
from holoknot.action.evaluate import exp_N_action_array
from holoknot.core.config import QuadratureSettings, Tolerances
from holoknot.diagram.diagram import OpenDiagram
from holoknot.quantize.log_coloring import LogColoring
from holoknot.quantize.quantize_error import PoleProximityError, QuantizeError
from holoknot.quantize.state_integral import StateIntegrator, TableEvaluator, default_cache
from holoknot.quantize.state_sum import StateSumResult, quantum_action, state_sum

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi


def dirichlet_kernel(K, x) -> np.ndarray:
    """1 + 2 sum_{k=1}^K cos(2 pi k x)."""
    x = np.asarray(x, dtype=float)
    result = np.ones_like(x)
    for k in range(1, K + 1):
        result += 2.0 * np.cos(2 * np.pi * k * x)
    return result


def fejer_kernel(K, x) -> np.ndarray:
    """1 + 2 sum_{k=1}^K (1 - k/(K+1)) cos(2 pi k x)."""
    x = np.asarray(x, dtype=float)
    result = np.ones_like(x)
    for k in range(1, K + 1):
        result += 2.0 * (1.0 - k / (K + 1.0)) * np.cos(2 * np.pi * k * x)
    return result


def box_weight(kernel, K, N):
    def weight(points):
        return np.prod(kernel(K, N * np.asarray(points)), axis=-1)

    return weight


@dataclass
class TheoremReport:
    N: int
    orders: list
    raw: list
    cesaro: list
    state_sum: StateSumResult
    raw_errors: list = field(default_factory=list)
    cesaro_errors: list = field(default_factory=list)
    quadrature_errors: list = field(default_factory=list)
    nodes: int = 0

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.cesaro_errors, self.cesaro_errors[1:]))

    @property
    def final_error(self) -> float:
        return self.cesaro_errors[-1] if self.cesaro_errors else np.inf

    @property
    def gap(self) -> float:
        """|S_0 - Z| / |Z|: the single k = 0 integral is not the invariant."""
        return self.raw_errors[0] if self.raw_errors else np.inf

    def to_document(self) -> dict:
        return {
            'N': self.N,
            'K': self.orders,
            'Z': self.state_sum.value,
            'raw': self.raw,
            'cesaro': self.cesaro,
            'raw_errors': self.raw_errors,
            'cesaro_errors': self.cesaro_errors,
            'quadrature_errors': self.quadrature_errors,
            'decreasing': self.decreasing,
            'nodes': self.nodes,
        }


def theorem_partial_sum(D: OpenDiagram, lc: LogColoring, N: int, K: int,
                        settings: QuadratureSettings = None, tolerances: Tolerances = None,
                        rng: Optional[np.random.Generator] = None, budget: Optional[int] = None,
                        integrator: StateIntegrator = None, reference: StateSumResult = None,
                        threads=1) -> TheoremReport:
    """S_K = N^{(E-1)/2} sum_{||k|| <= K} I_k for K = 0..K, raw and Cesaro
    averaged, against the state sum."""
    if K < 0:
        raise ValueError('K must be >= 0, got {0}'.format(K))
    settings = settings or QuadratureSettings()
    integrator = integrator or StateIntegrator(D, lc, N, settings, tolerances, threads=threads)
    reference = reference or state_sum(D, lc, N, tolerances=tolerances)
    rng = rng if rng is not None else np.random.default_rng(0)

    orders = list(range(K + 1))
    weights = [box_weight(dirichlet_kernel, order, N) for order in orders]
    weights += [box_weight(fejer_kernel, order, N) for order in orders]
    estimates, nodes = integrator.integrate_weighted(weights, int(budget or settings.qmc_points), rng)

    scale = float(N) ** ((len(D.E) - 1) / 2.0)
    raw = [scale * value for value, _ in estimates[:len(orders)]]
    cesaro = [scale * value for value, _ in estimates[len(orders):]]
    Z = reference.value
    report = TheoremReport(N, orders, raw, cesaro, reference, nodes=nodes)
    report.raw_errors = [abs(value - Z) / abs(Z) for value in raw]
    report.cesaro_errors = [abs(value - Z) / abs(Z) for value in cesaro]
    report.quadrature_errors = [scale * error / abs(Z) for _, error in estimates[len(orders):]]
    for order, error in zip(orders, report.cesaro_errors):
        logger.info('%s N=%d K=%d: cesaro relative error %.3g', D.name, N, order, error)
    return report


@dataclass
class FourierReport:
    axis: str
    base: tuple
    orders: list
    coefficients: np.ndarray
    lattice: np.ndarray
    targets: np.ndarray
    partial: dict
    cesaro: dict
    partial_errors: dict
    cesaro_errors: dict
    endpoint_defect: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def decreasing(self) -> bool:
        errors = [self.cesaro_errors[order] for order in self.orders]
        return all(b < a for a, b in zip(errors, errors[1:]))

    def to_document(self) -> dict:
        return {
            'axis': self.axis,
            'base': list(self.base),
            'K': self.orders,
            'lattice': self.lattice,
            'targets': self.targets,
            'partial_errors': {str(k): v for k, v in self.partial_errors.items()},
            'cesaro_errors': {str(k): v for k, v in self.cesaro_errors.items()},
            'endpoint_defect': self.endpoint_defect,
            'decreasing': self.decreasing,
            'diagnostics': self.diagnostics,
        }


def composite_legendre(panels, order=16):
    """Composite Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = roots_legendre(order)
    left = np.arange(panels)[:, None] / panels
    nodes = left + 0.5 * (x[None, :] + 1.0) / panels
    weights = np.broadcast_to(0.5 * w[None, :] / panels, nodes.shape)
    return nodes.ravel(), weights.ravel()


def fourier_coefficients(values, nodes, weights, K, chunk=128) -> np.ndarray:
    """c_k = int_0^1 g(s) e^{-2 pi i k s} ds for k = -K..K from quadrature data."""
    ks = np.arange(-K, K + 1)
    coefficients = np.empty(ks.size, dtype=complex)
    weighted = weights * values
    for start in range(0, ks.size, chunk):
        block = ks[start:start + chunk]
        coefficients[start:start + chunk] = np.exp(-TWO_PI_I * np.outer(block, nodes)) @ weighted
    return coefficients


def reconstruct(coefficients, s, K, cesaro=False) -> np.ndarray:
    full = (coefficients.size - 1) // 2
    ks = np.arange(-K, K + 1)
    c = coefficients[full - K:full + K + 1]
    if cesaro:
        c = c * (1.0 - np.abs(ks) / (K + 1.0))
    return np.exp(TWO_PI_I * np.outer(np.asarray(s), ks)) @ c


def fourier_verify_1d(D: OpenDiagram, lc: LogColoring, N: int, axis, base, K: int,
                      orders: Sequence[int] = None, settings: QuadratureSettings = None,
                      tolerances: Tolerances = None, action=None) -> FourierReport:
    """Fourier series of f restricted to one axis through the lattice point base/N.

    g(s) = exp(N A(beta/N + t)) with t_j = base_j / N off the axis and t_i = s.
    The coefficients come from composite Gauss-Legendre quadrature over
    tabulated values; partial sums and Cesaro means are compared with g at
    the lattice points s = j/N.
    """
    lc.require_unpinched()
    settings = settings or QuadratureSettings()
    tolerances = tolerances or Tolerances()
    action = action or quantum_action(D, lc, N, tolerances=tolerances)
    segment = D.E[lc.index(axis)] if not isinstance(axis, str) else axis
    i = D.index(segment)
    base = np.asarray(base, dtype=int).reshape(len(D.E))
    orders = sorted(set(orders or (max(1, K // 2), K)))
    if orders[-1] > K:
        raise ValueError('orders must not exceed K = {0}'.format(K))

    shift = base.copy()
    shift[i] = 0
    origin = lc.values(shift, N)
    evaluator = TableEvaluator(action, action.values(origin), (segment,),
                               default_cache(settings, tolerances), tolerances.singular_distance)

    def g(s, exact=False):
        t = np.repeat(origin[None, :], len(s), axis=0)
        t[:, i] += s
        values = action.values(t)
        try:
            return exp_N_action_array(action, values, evaluator=None if exact else evaluator)
        except SingularTermError as error:
            raise PoleProximityError('axis {0}: {1}'.format(segment, error), error.term,
                                     error.distance) from error

    nodes, weights = composite_legendre(max(64, K))
    values = g(nodes)
    scale = float(np.max(np.abs(values)))
    if not np.isfinite(scale) or scale == 0:
        raise QuantizeError('restricted summand is not finite along axis {0}'.format(segment))
    coefficients = fourier_coefficients(values, nodes, weights, K)

    lattice = np.arange(N) / N
    targets = g(lattice, exact=True)
    ends = g(np.array([0.0, 1.0]), exact=True)
    report = FourierReport(segment, tuple(int(n) for n in base), orders, coefficients, lattice, targets,
                           {}, {}, {}, {}, float(abs(ends[1] - ends[0]) / scale),
                           {'nodes': int(nodes.size), 'scale': scale})
    for order in orders:
        report.partial[order] = reconstruct(coefficients, lattice, order)
        report.cesaro[order] = reconstruct(coefficients, lattice, order, cesaro=True)
        report.partial_errors[order] = float(np.max(np.abs(report.partial[order] - targets)) / scale)
        report.cesaro_errors[order] = float(np.max(np.abs(report.cesaro[order] - targets)) / scale)
        logger.info('%s N=%d axis %s K=%d: partial %.3g, cesaro %.3g', D.name, N, segment, order,
                    report.partial_errors[order], report.cesaro_errors[order])
    return report


def residue_counts(k, N) -> np.ndarray:
    """counts[r] = #{n in [N]^E : k.n = r mod N}, by integer convolution."""
    counts = np.zeros(N, dtype=object)
    counts[0] = 1
    for component in k:
        step = np.zeros(N, dtype=object)
        for n in range(N):
            step[(component * n) % N] += 1
        convolved = np.zeros(N, dtype=object)
        for r in range(N):
            if counts[r]:
                for s in range(N):
                    if step[s]:
                        convolved[(r + s) % N] += counts[r] * step[s]
        counts = convolved
    return counts


def character_sum(k, N) -> int:
    """sum over n in [N]^E of e^{2 pi i k.n / N}, exactly.

    The residues k.n mod N are equidistributed over the subgroup they
    generate, so the sum is N^E when that subgroup is trivial and 0
    otherwise.
    """
    k = [int(component) for component in k]
    counts = residue_counts(k, N)
    support = [r for r in range(N) if counts[r]]
    if len(set(counts[r] for r in support)) != 1:
        raise QuantizeError('residue counts of k={0} mod {1} are not uniform'.format(k, N))
    if support == [0]:
        return int(counts[0])
    return 0
