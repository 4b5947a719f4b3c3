"""Nonlinear solving of the segment equations.

The system has a two dimensional gauge freedom, so two segment parameters
are pinned and damped Gauss-Newton runs on the others. When the reduced
Jacobian loses rank the full system goes to Levenberg-Marquardt.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from holoknot.core.config import SolverSettings, Tolerances
from holoknot.core.signals import Signal
from holoknot.diagram.diagram import OpenDiagram
from holoknot.geometry.geometry_error import ConvergenceError, DegenerateShapeError, GeometryError
from holoknot.geometry.segment_equations import SegmentEquationSystem, default_pins
from holoknot.geometry.shapes import shape_parameters
from holoknot.geometry.solution_model import SolutionModel
from lib.numeric import numerical_rank

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class SolveResult:
    b: np.ndarray
    residual: float
    iterations: int
    pins: Tuple[str, ...]
    method: str
    seed_index: int = -1
    diagnostics: dict = field(default_factory=dict)


def _norm(residual):
    return float(np.linalg.norm(residual)) if np.all(np.isfinite(residual)) else np.inf


def _safe_residual(system, b):
    try:
        with np.errstate(divide='ignore', invalid='ignore'):
            return system.residual(b)
    except (DegenerateShapeError, ZeroDivisionError):
        return np.full(len(system), np.inf, dtype=complex)


def _check_degenerate(D, m, b, tolerance):
    shapes = shape_parameters(b, m, D)
    degenerate = shapes.degenerate(tolerance)
    if degenerate:
        crossing, corner = degenerate[0]
        raise DegenerateShapeError('solution has degenerate shape {0}.{1}'.format(crossing, corner),
                                   crossing, corner)


def _levenberg_marquardt(system, b, settings):
    n = len(system)

    def split(x):
        return x[:n] + 1j * x[n:]

    def residual(x):
        r = _safe_residual(system, split(x))
        r = np.where(np.isfinite(r), r, 1e150)
        return np.concatenate([r.real, r.imag])

    def jacobian(x):
        J = system.jacobian(split(x))
        return np.block([[J.real, -J.imag], [J.imag, J.real]])

    x0 = np.concatenate([b.real, b.imag])
    result = least_squares(residual, x0, jac=jacobian, method='lm', xtol=1e-15, ftol=1e-15,
                           gtol=1e-15, max_nfev=50 * settings.max_iterations)
    return split(result.x), int(result.nfev)


def solve_segment_equations(D: OpenDiagram, m, seed, pins: Optional[Sequence[str]] = None,
                            settings: SolverSettings = None,
                            tolerances: Tolerances = None) -> SolveResult:
    """Solve the segment equations from ``seed``, holding ``pins`` at their seed values.

    :raises ConvergenceError: when the residual stays above the Newton tolerance.
    :raises DegenerateShapeError: when the solution has a shape at 0, 1 or infinity.
    """
    settings = settings or SolverSettings()
    tolerances = tolerances or Tolerances()
    tolerance = tolerances.newton_residual
    system = SegmentEquationSystem(D, m)
    pins = tuple(default_pins(D) if pins is None else pins)
    if len(pins) > 2:
        raise GeometryError('at most two pinned segments, got {0}'.format(len(pins)))
    b = np.array(seed, dtype=complex).reshape(len(D.E))
    if np.any(b == 0) or not np.all(np.isfinite(b)):
        raise DegenerateShapeError('seed has a zero or infinite segment parameter')

    residual = _safe_residual(system, b)
    if _norm(residual) == np.inf:
        raise DegenerateShapeError('seed is degenerate')
    if np.max(np.abs(residual)) <= tolerance:
        return SolveResult(b, float(np.max(np.abs(residual))), 0, pins, 'seed')

    free = [i for i, segment in enumerate(D.E) if segment not in pins]
    method = 'newton'
    iterations = 0
    for iterations in range(1, settings.max_iterations + 1):
        J = system.jacobian(b)[:, free]
        rank, _ = numerical_rank(J)
        if rank < len(free):
            method = 'lm'
            break
        step = np.linalg.lstsq(J, -residual, rcond=None)[0]
        damping = 1.0
        current = _norm(residual)
        while damping >= settings.damping_min:
            candidate = b.copy()
            candidate[free] += damping * step
            candidate_residual = _safe_residual(system, candidate)
            if _norm(candidate_residual) < current:
                break
            damping *= 0.5
        else:
            method = 'lm'
            break
        b, residual = candidate, candidate_residual
        if np.max(np.abs(residual)) <= tolerance:
            break
    else:
        method = 'lm'

    if method == 'lm' and np.max(np.abs(residual)) > tolerance:
        logger.debug('%s: Newton stalled after %d iterations, switching to LM', D.name, iterations)
        b, evaluations = _levenberg_marquardt(system, b, settings)
        iterations += evaluations
        residual = _safe_residual(system, b)
    else:
        method = 'newton'

    worst = float(np.max(np.abs(residual)))
    if not np.isfinite(worst) or worst > tolerance:
        raise ConvergenceError('{0}: segment equations residual {1:.3g} after {2} iterations'.format(
            D.name, worst, iterations))
    _check_degenerate(D, m, b, tolerances.singular_distance)
    return SolveResult(b, worst, iterations, pins, method)


def random_seed(rng: np.random.Generator, size, radius=SolverSettings.seed_radius.default):
    """Parameters with log|b| spread by ``radius`` around 0 and uniform phases."""
    return np.exp(rng.normal(0.0, radius, size) + 2j * np.pi * rng.uniform(0.0, 1.0, size))


class MultistartSolver:
    """Seeded multistart over the segment equations.

    Pins take the same random values in every start, so solutions that
    differ only by gauge coincide and are merged by the solution model.
    """

    def __init__(self, D: OpenDiagram, m, settings: SolverSettings = None,
                 tolerances: Tolerances = None, pins: Optional[Sequence[str]] = None):
        self.diagram = D
        self.m = complex(m)
        self.settings = settings or SolverSettings()
        self.tolerances = tolerances or Tolerances()
        self.pins = tuple(default_pins(D) if pins is None else pins)

        self.pre_solve = Signal()
        """Slot signature: slot(seed_index, seed)"""
        self.post_solve = Signal()
        """Slot signature: slot(seed_index, result)"""
        self.error_solve = Signal()
        """Slot signature: slot(seed_index, error)"""

    def run(self, rng: np.random.Generator, seeds: Optional[int] = None,
            pin_values=None) -> SolutionModel:
        seeds = self.settings.seeds if seeds is None else seeds
        size = len(self.diagram.E)
        positions = [self.diagram.index(segment) for segment in self.pins]
        if pin_values is None:
            pin_values = random_seed(rng, len(positions), self.settings.seed_radius)
        model = SolutionModel(self.settings.dedup_distance)

        for index in range(seeds):
            seed = random_seed(rng, size, self.settings.seed_radius)
            seed[positions] = pin_values
            self.pre_solve.emit(index, seed)
            try:
                result = solve_segment_equations(self.diagram, self.m, seed, self.pins,
                                                 self.settings, self.tolerances)
            except GeometryError as error:
                self.error_solve.emit(index, error)
                continue
            result.seed_index = index
            self.post_solve.emit(index, result)
            model.add(result)

        logger.info('%s: %d distinct solutions from %d seeds', self.diagram.name, len(model), seeds)
        return model
