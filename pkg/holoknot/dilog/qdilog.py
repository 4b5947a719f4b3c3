"""Faddeev's noncompact quantum dilogarithm and its level N specialization.

::

    Phi_b(z) = exp( integral over R + i eps of e^{-2 i z w} / (4 sinh(w b) sinh(w / b)) dw / w )

valid for |Im z| < Im c_b with c_b = i (b + 1/b) / 2. The contour integral
is a trapezoid sum, spectrally accurate because the integrand is analytic in
a strip around the contour and decays exponentially.

At b = sqrt(N)::

    e^{phi_N(t)} = Phi_b(i b t - c_b + i / b)

which satisfies e^{phi_N(t - 1/N)} = (1 - e^{2 pi i t}) e^{phi_N(t)}. Its
zeros are the points k/N with k <= -1 and its poles the points k/N with
k >= N.
"""
import cmath
import logging
import math
from collections import OrderedDict

import numpy as np

from holoknot.core.config import Tolerances, QuadratureSettings
from holoknot.dilog.dilog_error import StripError, QuadratureError, SingularityError

logger = logging.getLogger(__name__)

# trapezoid discretisation error is about exp(-2 pi d / h)
_DIGITS = 37.0
# integrand entries evaluated at once
_CHUNK = 1 << 20
# memoized arguments per context
_MEMO_SIZE = 1 << 16


class ContourRule:
    """Offset, truncation and step of the contour sum for a given b."""

    def __init__(self, b, epsilon=None):
        self.b = float(b)
        big = max(self.b, 1.0 / self.b)
        self.im_cb = 0.5 * (self.b + 1.0 / self.b)
        if epsilon is None:
            epsilon = min(0.25, self.im_cb / 4.0, math.pi / (2.0 * big))
        if not 0.0 < epsilon < math.pi / big:
            raise QuadratureError('contour offset {0} crosses a pole of the integrand'.format(epsilon))
        self.epsilon = float(epsilon)
        # half width of the pole free strip around the contour
        self.width = min(self.epsilon, math.pi / big - self.epsilon)

    def step(self, re_z):
        return 2.0 * math.pi * self.width / (_DIGITS + 2.0 * abs(re_z) * self.width)

    def cutoff(self, re_z, im_z):
        rate = 2.0 * (self.im_cb - abs(im_z))
        return (_DIGITS + 3.0 + 2.0 * self.epsilon * abs(re_z)) / rate + 1.0

    def integrand(self, z, x):
        """Integrand at w = x + i eps for an array of z (rows) and nodes (columns)."""
        w = x + 1j * self.epsilon
        kernel = 1.0 / (4.0 * np.sinh(w * self.b) * np.sinh(w / self.b) * w)
        return np.exp(-2j * np.multiply.outer(z, w)) * kernel


def _node_sum(rule, z, nodes):
    total = np.zeros(z.shape, dtype=complex)
    chunk = max(1, _CHUNK // max(1, z.size))
    for start in range(0, nodes.size, chunk):
        total += rule.integrand(z, nodes[start:start + chunk]).sum(axis=-1)
    return total


def log_faddeev(z, b, epsilon=None, tolerance=Tolerances.quadrature.default,
                max_refinements=QuadratureSettings.max_refinements.default):
    """The exponent of Phi_b for a scalar or an array of z in the strip.

    The step is halved, reusing the previous nodes, until two successive
    sums agree to ``tolerance``.

    :raises StripError: for arguments outside |Im z| < Im c_b.
    :raises QuadratureError: when refinement does not settle.
    """
    rule = ContourRule(b, epsilon)
    z = np.asarray(z, dtype=complex)
    im_bound = float(np.max(np.abs(z.imag))) if z.size else 0.0
    if im_bound >= rule.im_cb:
        raise StripError('|Im z| = {0} is outside the strip of width {1}'.format(im_bound, rule.im_cb))
    re_bound = float(np.max(np.abs(z.real))) if z.size else 0.0

    step = rule.step(re_bound)
    count = int(math.ceil(rule.cutoff(re_bound, im_bound) / step))
    value = step * _node_sum(rule, z, np.arange(-count, count + 1) * step)
    for _ in range(max_refinements):
        # the previous nodes are reused, only midpoints are new
        midpoints = (np.arange(-count, count) + 0.5) * step
        refined = 0.5 * value + 0.5 * step * _node_sum(rule, z, midpoints)
        step *= 0.5
        count *= 2
        error = float(np.max(np.abs(refined - value))) if z.size else 0.0
        value = refined
        if error <= tolerance:
            return value
    raise QuadratureError('contour sum did not settle below {0} for b = {1}'.format(tolerance, b))


def faddeev(z, b, epsilon=None, tolerance=Tolerances.quadrature.default,
            max_refinements=QuadratureSettings.max_refinements.default):
    return np.exp(log_faddeev(z, b, epsilon, tolerance, max_refinements))


class QDilogContext:
    """Evaluator of e^{phi_N} at level N with b = sqrt(N).

    Arguments are moved into the 1/N wide window centred at (1 - 1/N) / 2,
    where the Faddeev argument vanishes, with the recurrence; only that base
    point goes through the contour sum. The last ``memo_size`` values are
    memoized per argument, least recently used first out.
    """

    def __init__(self, N, tolerance=Tolerances.quadrature.default,
                 max_refinements=QuadratureSettings.max_refinements.default,
                 singular_distance=Tolerances.singular_distance.default, epsilon=None,
                 memo_size=_MEMO_SIZE):
        if int(N) != N or N < 2:
            raise ValueError('level N must be an integer >= 2, got {0}'.format(N))
        self.N = int(N)
        self.b = math.sqrt(self.N)
        self.c_b = 0.5j * (self.b + 1.0 / self.b)
        self.tolerance = tolerance
        self.max_refinements = max_refinements
        self.singular_distance = singular_distance
        self.epsilon = epsilon
        self.center = 0.5 * (1.0 - 1.0 / self.N)
        self.memo_size = int(memo_size)
        self._memo = OrderedDict()

    def faddeev_argument(self, t):
        return 1j * self.b * np.asarray(t) - self.c_b + 1j / self.b

    def phi_b(self, z):
        return faddeev(z, self.b, self.epsilon, self.tolerance, self.max_refinements)

    def nearest_singular_point(self, t: complex):
        """The closest pole or zero k/N (k <= -1 or k >= N) and its distance."""
        k = round(t.real * self.N)
        candidates = (min(k, -1) / self.N, max(k, self.N) / self.N)
        return min(((point, abs(t - point)) for point in candidates), key=lambda item: item[1])

    def check_regular(self, t: complex):
        point, distance = self.nearest_singular_point(t)
        if distance < self.singular_distance:
            raise SingularityError(t, point, distance)
        return distance

    def reduce(self, t: complex):
        """Split t into a window point and the integer number of 1/N steps."""
        j = int(round((t.real - self.center) * self.N))
        return t - j / self.N, j

    def recurrence_factor(self, t: complex, j: int) -> complex:
        """e^{phi_N(t)} / e^{phi_N(t - j/N)}."""
        factor = 1.0 + 0j
        if j > 0:
            for i in range(j):
                factor /= 1.0 - cmath.exp(2j * cmath.pi * (t - i / self.N))
        elif j < 0:
            for i in range(1, -j + 1):
                factor *= 1.0 - cmath.exp(2j * cmath.pi * (t + i / self.N))
        return factor

    def pfl_exp(self, t) -> complex:
        """e^{phi_N(t)}.

        :raises SingularityError: when t is within the singular distance of a
            pole or zero.
        """
        return complex(self.pfl_exp_array(np.array([t], dtype=complex))[0])

    def pfl_exp_array(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=complex)
        flat = ts.ravel()
        result = np.empty(flat.shape, dtype=complex)
        pending, bases, factors = [], [], []
        for index, t in enumerate(flat):
            t = complex(t)
            cached = self._memo.get(t)
            if cached is not None:
                self._memo.move_to_end(t)
                result[index] = cached
                continue
            self.check_regular(t)
            base, j = self.reduce(t)
            pending.append(index)
            bases.append(base)
            factors.append(self.recurrence_factor(t, j))

        if pending:
            z = self.faddeev_argument(np.array(bases))
            values = self.phi_b(z) * np.array(factors)
            for index, value in zip(pending, values):
                result[index] = value
                self._remember(complex(flat[index]), complex(value))
            logger.debug('N=%d: %d contour evaluations', self.N, len(pending))
        return result.reshape(ts.shape)

    def _remember(self, t, value):
        self._memo[t] = value
        self._memo.move_to_end(t)
        while len(self._memo) > self.memo_size:
            self._memo.popitem(last=False)

    def memo_length(self):
        return len(self._memo)

    def clear(self):
        self._memo.clear()
