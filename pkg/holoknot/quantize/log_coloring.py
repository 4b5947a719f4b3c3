import cmath
import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from holoknot.coloring.coloring_error import InadmissibleError
from holoknot.coloring.gauge_search import GaugeSearchResult, unit_circle_gauge_search
from holoknot.coloring.representation import Representation
from holoknot.coloring.segment_coloring import is_pinched
from holoknot.coloring.shadow import ShadowColoring, parameters, propagate_shadow
from holoknot.core.config import SolverSettings, Tolerances
from holoknot.core.core_error import InputError
from holoknot.diagram.diagram import OpenDiagram
from holoknot.quantize.quantize_error import PinchedColoringError

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi


@dataclass(frozen=True)
class LogColoring:
    """Logarithms beta of the internal segment parameters and a log-meridian mu.

    e^{2 pi i beta_i} = b_i and e^{2 pi i mu} = m; the boundary segment has
    parameter 1 and log-parameter 0 and carries no entry here.
    """
    diagram: OpenDiagram
    beta: np.ndarray
    mu: complex
    pinched: Tuple[str, ...] = ()

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=complex)
        if beta.shape != (len(self.diagram.E),):
            raise InputError('expected {0} log-parameters, got shape {1}'.format(
                len(self.diagram.E), beta.shape))
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'mu', complex(self.mu))

    @property
    def b(self) -> np.ndarray:
        return np.exp(TWO_PI_I * self.beta)

    @property
    def m(self) -> complex:
        return cmath.exp(TWO_PI_I * self.mu)

    def require_unpinched(self):
        if self.pinched:
            raise PinchedColoringError(self.pinched)
        return self

    def index(self, segment) -> int:
        return segment if isinstance(segment, (int, np.integer)) else self.diagram.index(segment)

    def shifted(self, segment, j: int) -> 'LogColoring':
        """beta_segment moved by the integer j."""
        if int(j) != j:
            raise InputError('logarithm shifts must be integral, got {0}'.format(j))
        beta = self.beta.copy()
        beta[self.index(segment)] += int(j)
        return replace(self, beta=beta)

    def with_mu(self, mu, tolerance=1e-12) -> 'LogColoring':
        """Another logarithm of the same meridian eigenvalue."""
        mu = complex(mu)
        if abs(cmath.exp(TWO_PI_I * mu) - self.m) > tolerance * max(1.0, abs(self.m)):
            raise InputError('e^(2 pi i mu) = {0} differs from m = {1}'.format(
                cmath.exp(TWO_PI_I * mu), self.m))
        return replace(self, mu=mu)

    def values(self, n, N) -> np.ndarray:
        """(beta + n) / N for lattice indices n of shape (..., E)."""
        return (self.beta + np.asarray(n)) / N

    @classmethod
    def from_parameters(cls, D: OpenDiagram, b, mu: complex, pinched=()) -> 'LogColoring':
        b = np.asarray(b, dtype=complex)
        if np.any(~np.isfinite(b)) or np.any(b == 0):
            raise InadmissibleError('segment parameters must be finite and nonzero')
        return cls(D, np.log(b) / TWO_PI_I, mu, tuple(pinched))

    @classmethod
    def from_shadow(cls, shadow: ShadowColoring, mu: Optional[complex] = None,
                    tolerance=Tolerances.residual.default) -> 'LogColoring':
        """Principal logarithms of a normalized admissible shadow coloring."""
        D = shadow.diagram
        parameter_set = parameters(shadow, tolerance)
        if not parameter_set.admissible:
            raise InadmissibleError('inadmissible parameters at {0}'.format(
                ', '.join(parameter_set.inadmissible)))
        if not parameter_set.normalized:
            raise InadmissibleError('boundary segment parameter is {0}, not 1'.format(
                parameter_set.b_boundary))
        if mu is None:
            mu = cmath.log(shadow.m) / TWO_PI_I
        pinch = is_pinched(D, shadow.base)
        return cls.from_parameters(D, parameter_set.b_vector(D.E), mu, pinch.pinched)


def log_coloring_from_representation(D: OpenDiagram, representation: Representation,
                                     rng: np.random.Generator, mu: Optional[complex] = None,
                                     tolerances: Tolerances = None,
                                     settings: SolverSettings = None):
    """Shadow coloring, unit circle gauge search and logarithms in one go.

    Returns the log coloring and the gauge search result.

    :raises PinchedColoringError: when the representation is pinched.
    """
    tolerances = tolerances or Tolerances()
    settings = settings or SolverSettings()
    pinch = is_pinched(D, representation.coloring, tolerances.projective)
    if pinch.any:
        raise PinchedColoringError(pinch.pinched)

    shadow = propagate_shadow(D, representation.coloring, representation.u0,
                              representation.base_region, tolerances.residual)
    search: GaugeSearchResult = unit_circle_gauge_search(shadow, rng, settings.gauge_trials,
                                                         tolerances.unit_circle_margin,
                                                         tolerances.residual)
    if not search.report.avoids:
        logger.warning('%s: best gauge keeps only %.3g from the unit circle (at %s)', D.name,
                       search.report.margin, search.report.worst)
    return LogColoring.from_shadow(search.shadow, mu, tolerances.residual), search
