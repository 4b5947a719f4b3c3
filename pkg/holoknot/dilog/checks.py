"""Functional equation checks of the dilogarithms at one level N.

Each check compares two independently computed sides and reports the worst
relative discrepancy against its threshold.
"""
import cmath
import logging
from dataclasses import dataclass, field
from typing import List

import mpmath
import numpy as np

from holoknot.core.config import Tolerances
from holoknot.dilog.classical import dll, dll_branch, li2, exp_dll_prime
from holoknot.dilog.qdilog import QDilogContext, log_faddeev, ContourRule

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    error: float
    threshold: float
    details: dict = field(default_factory=dict)
    informational: bool = False

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.threshold)

    def to_document(self):
        return {'name': self.name, 'error': self.error, 'threshold': self.threshold,
                'passed': self.passed, 'informational': self.informational,
                'details': self.details}


def _relative(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def strip_points(rng, count, N, margin=0.1):
    """Points t with 0 < Re t < 1 and both t and t - 1/N inside the contour strip."""
    x = rng.uniform(margin, 1.0 - margin, count)
    y = rng.uniform(-0.3, 0.3, count)
    return x + 1j * y


def check_recurrence(ctx: QDilogContext, points) -> CheckResult:
    """Contour values at t and t - 1/N against the recurrence factor."""
    here = ctx.phi_b(ctx.faddeev_argument(points))
    before = ctx.phi_b(ctx.faddeev_argument(points - 1.0 / ctx.N))
    error = _relative(here * (1 - np.exp(2j * np.pi * points)), before)
    return CheckResult('recurrence', error, 1e-9, {'N': ctx.N, 'points': len(points)})


def check_reduction(ctx: QDilogContext, points) -> CheckResult:
    """Window reduced values against direct contour values."""
    direct = ctx.phi_b(ctx.faddeev_argument(points))
    reduced = ctx.pfl_exp_array(points)
    return CheckResult('reduction', _relative(reduced, direct), 1e-9, {'N': ctx.N})


def check_unit_shift(ctx: QDilogContext, points) -> CheckResult:
    shifted = ctx.pfl_exp_array(points + 1.0)
    lhs = shifted * (1 - np.exp(2j * np.pi * ctx.N * points))
    error = _relative(lhs, ctx.pfl_exp_array(points))
    product = np.prod([1 - np.exp(2j * np.pi * (points + j / ctx.N))
                       for j in range(1, ctx.N + 1)], axis=0)
    product_error = _relative(product, 1 - np.exp(2j * np.pi * ctx.N * points))
    return CheckResult('unit_shift', max(error, product_error), 1e-9,
                       {'product_identity': product_error})


def _faddeev_points(rng, count, b):
    bound = 0.5 * ContourRule(b).im_cb
    return rng.uniform(-2.0, 2.0, count) + 1j * rng.uniform(-bound, bound, count)


def check_b_symmetry(b, z, tolerance) -> CheckResult:
    a = log_faddeev(z, b, tolerance=tolerance)
    c = log_faddeev(z, 1.0 / b, tolerance=tolerance)
    return CheckResult('b_symmetry', float(np.max(np.abs(np.exp(a - c) - 1))), 1e-10)


def check_two_grids(b, z, tolerance) -> CheckResult:
    rule = ContourRule(b)
    a = log_faddeev(z, b, tolerance=tolerance)
    c = log_faddeev(z, b, epsilon=0.6 * rule.epsilon, tolerance=tolerance)
    return CheckResult('two_grids', float(np.max(np.abs(np.exp(a - c) - 1))), 1e-10,
                       {'epsilon': [rule.epsilon, 0.6 * rule.epsilon]})


def check_conjugation(b, z, tolerance) -> CheckResult:
    a = log_faddeev(z, b, tolerance=tolerance)
    c = log_faddeev(np.conj(z), b, tolerance=tolerance)
    return CheckResult('conjugation', float(np.max(np.abs(np.exp(np.conj(a) + c) - 1))), 1e-10)


def check_b_shift(b, rng, count, tolerance) -> CheckResult:
    """Phi_b(z - i c / 2) = (1 + e^{2 pi c z}) Phi_b(z + i c / 2) with c the smaller of b and 1/b."""
    z = rng.uniform(-1.0, 1.0, count) + 1j * rng.uniform(-0.2, 0.2, count)
    small = min(b, 1.0 / b)
    lower = log_faddeev(z - 0.5j * small, b, tolerance=tolerance)
    upper = log_faddeev(z + 0.5j * small, b, tolerance=tolerance)
    ratio = np.exp(lower - upper) / (1 + np.exp(2 * np.pi * small * z))
    return CheckResult('b_shift', float(np.max(np.abs(ratio - 1))), 1e-9, {'b': small})


def check_dll_derivative(rng, count, step=1e-5) -> CheckResult:
    zeta = rng.uniform(-1.5, 2.5, count) + 1j * rng.choice([-1, 1], count) * rng.uniform(0.05, 0.8, count)
    errors = []
    for point in zeta:
        derivative = (dll(point + step).value - dll(point - step).value) / (2 * step)
        errors.append(abs(cmath.exp(derivative) * (1 - cmath.exp(2j * cmath.pi * point)) - 1))
        errors.append(abs(cmath.exp(derivative) / exp_dll_prime(point) - 1))
    return CheckResult('dll_derivative', max(errors), 1e-6)


def check_dll_branches() -> CheckResult:
    near = max(abs(dll(x + 1e-6j).value - dll(x - 1e-6j).value) for x in (0.25, 0.5, 0.75))
    on_axis = max(abs(dll_branch(x, 'upper') - dll_branch(x, 'lower'))
                  for x in np.linspace(0.05, 0.95, 19))
    return CheckResult('dll_branches', on_axis, 1e-8, {'near_axis': near,
                                                        'near_axis_passed': near < 1e-4})


def check_li2() -> CheckResult:
    errors = {}
    for z in (0.5, -1.0, 0.3 + 0.4j, -0.7 + 1.1j, 2.0 + 0.5j):
        exact = complex(mpmath.quad(lambda t: -mpmath.log(1 - t) / t, [0, z]))
        errors[str(z)] = abs(li2(z) - exact) / max(abs(exact), 1e-300)
    errors['0'] = abs(li2(0.0))
    return CheckResult('li2_integral', max(errors.values()), 1e-12, errors)


def check_scaling(N, im=0.2, count=9) -> CheckResult:
    """Growth of e^{phi_N} against l, for the N l and the l / N conventions."""
    ctx = QDilogContext(N)
    x = np.linspace(0.1, 0.9, count)
    t = x + 1j * im
    observed = np.log(np.abs(ctx.pfl_exp_array(t)))
    classical = np.array([dll(point + 0.5 / N).value.real for point in t])
    scaled = float(np.max(np.abs(observed / N - classical)))
    printed = float(np.max(np.abs(observed * N - classical)))
    return CheckResult('scaling', scaled, max(printed, 1e-300),
                       {'N_times_l_error': scaled, 'l_over_N_error': printed},
                       informational=True)


def run_checks(N, seed=0, tolerances: Tolerances = None) -> List[CheckResult]:
    tolerances = tolerances or Tolerances()
    rng = np.random.default_rng(seed)
    ctx = QDilogContext(N, tolerance=tolerances.quadrature * 1e-2,
                        singular_distance=tolerances.singular_distance)
    points = strip_points(rng, 50, N)
    b = ctx.b
    z = _faddeev_points(rng, 20, b)
    tolerance = tolerances.quadrature * 1e-2

    results = [
        check_recurrence(ctx, points),
        check_reduction(ctx, points[:10]),
        check_unit_shift(ctx, points[:20]),
        check_b_symmetry(b, z, tolerance),
        check_two_grids(b, z, tolerance),
        check_conjugation(b, z, tolerance),
        check_b_shift(b, rng, 10, tolerance),
        check_dll_derivative(rng, 20),
        check_dll_branches(),
        check_li2(),
        check_scaling(N),
    ]
    for result in results:
        log = logger.info if result.passed else logger.warning
        log('dilog check %s at N=%d: error %.3g (threshold %.3g)', result.name, N,
            result.error, result.threshold)
    return results
