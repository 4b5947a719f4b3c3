"""Generalized critical points of the classical action and Chern-Simons values.

A point gamma is critical when exp(dV/dt_i) = 1 for every segment, which
is the m = 1 segment equations in the variables b_i = e^{2 pi i gamma_i}.
The flattening is k = dV/dt / (2 pi i), and the volume is read off
V(gamma) - 2 pi i k.gamma, whose real part does not depend on the chosen
logarithms of b.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from holoknot.action.builder import build_classical_action
from holoknot.action.evaluate import (eval_classical, exp_grad_classical, gradient_classical,
                                      hessian_classical, in_omega)
from holoknot.action.symbolic import SymbolicAction
from holoknot.core.config import SolverSettings, Tolerances
from holoknot.diagram.diagram import OpenDiagram
from holoknot.dilog.classical import bloch_wigner
from holoknot.geometry.geometry_error import ConvergenceError, GeometryError
from holoknot.geometry.shapes import shape_parameters
from holoknot.geometry.solver import MultistartSolver, SolveResult, solve_segment_equations
from lib.numeric import numerical_rank

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi


@dataclass
class CriticalPoint:
    gamma: np.ndarray
    k: np.ndarray
    value: complex
    diagnostics: dict = field(default_factory=dict)

    @property
    def b(self) -> np.ndarray:
        return np.exp(TWO_PI_I * self.gamma)

    @property
    def k_integral(self) -> np.ndarray:
        return np.round(self.k.real).astype(int)

    @property
    def flattening_defect(self) -> float:
        return float(np.max(np.abs(self.k - self.k_integral))) if self.k.size else 0.0

    @property
    def reduced_value(self) -> complex:
        """V(gamma) - 2 pi i k.gamma."""
        return self.value - TWO_PI_I * complex(np.dot(self.k_integral, self.gamma))


def log_parameters(b) -> np.ndarray:
    """gamma with e^{2 pi i gamma} = b, real parts in (-1/2, 1/2]."""
    return np.log(np.asarray(b, dtype=complex)) / TWO_PI_I


def critical_point_from_parameters(action: SymbolicAction, b,
                                   tolerances: Tolerances = None) -> CriticalPoint:
    """The critical point with e^{2 pi i gamma} = b for m = 1 segment parameters b.

    :raises GeometryError: when gamma leaves the domain of V, or the exponentiated
        gradient misses 1.
    """
    tolerances = tolerances or Tolerances()
    gamma = log_parameters(b)
    if not in_omega(action, gamma, tolerances.omega_margin):
        raise GeometryError('critical point lies on a branch cut of the classical action')

    exp_grad = exp_grad_classical(action, gamma, tolerances.omega_margin)
    defect = float(np.max(np.abs(exp_grad - 1))) if exp_grad.size else 0.0
    if defect > 1e2 * tolerances.newton_residual:
        raise ConvergenceError('exp grad V differs from 1 by {0:.3g}'.format(defect))

    gradient = gradient_classical(action, gamma, tolerances.omega_margin)
    hessian = hessian_classical(action, gamma, tolerances.omega_margin)
    rank, singular_values = numerical_rank(hessian)
    point = CriticalPoint(gamma, gradient / TWO_PI_I, eval_classical(action, gamma, tolerances.omega_margin))
    point.diagnostics.update({
        'exp_grad_defect': defect,
        'flattening_defect': point.flattening_defect,
        'hessian_rank': rank,
        'hessian_singular_values': singular_values,
    })
    if point.flattening_defect > tolerances.flattening_defect:
        logger.warning('%s: flattening defect %.3g', action.diagram.name, point.flattening_defect)
    return point


def find_critical_point(D: OpenDiagram, seed=None, rng: Optional[np.random.Generator] = None,
                        settings: SolverSettings = None, tolerances: Tolerances = None,
                        action: Optional[SymbolicAction] = None) -> CriticalPoint:
    """Critical point of V through the m = 1 segment equations.

    With ``seed`` (segment parameters b) a single solve runs; otherwise a
    multistart from ``rng`` returns the solution of largest |volume|.
    """
    settings = settings or SolverSettings()
    tolerances = tolerances or Tolerances()
    action = action or build_classical_action(D)

    if seed is not None:
        result = solve_segment_equations(D, 1.0, seed, settings=settings, tolerances=tolerances)
        point = critical_point_from_parameters(action, result.b, tolerances)
        point.diagnostics.update(_solve_diagnostics(result))
        return point

    rng = rng or np.random.default_rng(0)
    best = None
    for attempt in range(4):
        model = MultistartSolver(D, 1.0, settings, tolerances).run(rng)
        for result in model:
            try:
                point = critical_point_from_parameters(action, result.b, tolerances)
            except GeometryError as error:
                logger.debug('%s: solution %d rejected: %s', D.name, result.seed_index, error)
                continue
            point.diagnostics.update(_solve_diagnostics(result))
            if best is None or abs(volume(point)) > abs(volume(best)) + 1e-9:
                best = point
        if best is not None:
            return best
        logger.info('%s: no critical point in Omega on attempt %d', D.name, attempt + 1)
    raise ConvergenceError('{0}: no critical point found'.format(D.name))


def _solve_diagnostics(result: SolveResult):
    return {'residual': result.residual, 'iterations': result.iterations,
            'pins': list(result.pins), 'method': result.method, 'seed_index': result.seed_index}


def volume(point: CriticalPoint) -> float:
    """2 pi Re(V(gamma) - 2 pi i k.gamma), signed."""
    return 2 * np.pi * point.reduced_value.real


def chern_simons(point: CriticalPoint, oracle: Optional[float] = None) -> dict:
    """Critical values, both volume signs and the Chern-Simons phase."""
    reduced = point.reduced_value
    signed = 2 * np.pi * reduced.real
    report = {
        'value': point.value,
        'reduced_value': reduced,
        'volume': abs(signed),
        'volume_signed': signed,
        'volume_raw': 2 * np.pi * point.value.real,
        'cs_phase': float((2 * np.pi * reduced.imag) % (2 * np.pi)),
    }
    if oracle is not None:
        report['sign_matching_oracle'] = '+' if abs(signed - oracle) <= abs(signed + oracle) else '-'
    return report


def conjugate(point: CriticalPoint, action: SymbolicAction,
              tolerances: Tolerances = None) -> CriticalPoint:
    """The complex conjugate solution b -> conj(b), with opposite volume."""
    return critical_point_from_parameters(action, np.conj(point.b), tolerances)


def bloch_wigner_volume(shapes) -> float:
    """Sum of D(z) over all tetrahedra; ``shapes`` maps (crossing, corner) -> z."""
    return float(np.sum([bloch_wigner(z) for z in shapes.values()]))


def critical_summary(D: OpenDiagram, point: CriticalPoint, oracle: Optional[float] = None) -> dict:
    report = chern_simons(point, oracle)
    report.update({
        'gamma': point.gamma,
        'k': point.k_integral,
        'flattening_defect': point.flattening_defect,
        'bloch_wigner': bloch_wigner_volume(shape_parameters(point.b, 1.0, D)),
        'diagnostics': point.diagnostics,
    })
    return report


def shifted(point: CriticalPoint, action: SymbolicAction, shifts) -> CriticalPoint:
    """The same critical point with gamma moved by integers, recomputed."""
    gamma = point.gamma + np.asarray(shifts)
    gradient = gradient_classical(action, gamma)
    return replace(point, gamma=gamma, k=gradient / TWO_PI_I, value=eval_classical(action, gamma),
                   diagnostics=dict(point.diagnostics))
