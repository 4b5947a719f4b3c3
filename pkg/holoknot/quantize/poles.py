"""Distances of phi_N arguments to the poles and zeros k/N (k <= -1 or k >= N)."""
import itertools
import logging

import numpy as np

from holoknot.action.symbolic import SymbolicAction
from holoknot.diagram.diagram import OpenDiagram
from holoknot.quantize.log_coloring import LogColoring
from holoknot.quantize.state_sum import quantum_action

logger = logging.getLogger(__name__)


def singular_distance(N, arguments) -> np.ndarray:
    """Elementwise distance of ``arguments`` to the singular set of e^{phi_N}."""
    t = np.asarray(arguments, dtype=complex)
    k = np.round(t.real * N)
    below = np.minimum(k, -1) / N
    above = np.maximum(k, N) / N
    return np.minimum(np.abs(t - below), np.abs(t - above))


def contour_distance(N, offset: complex, window) -> float:
    """Distance of the horizontal segment offset + [lo, hi] to the singular set."""
    lo, hi = offset.real + window[0], offset.real + window[1]
    ks = np.arange(np.floor(lo * N) - 1, np.ceil(hi * N) + 2)
    ks = ks[(ks <= -1) | (ks >= N)]
    ks = np.union1d(ks, [-1, N])
    points = ks / N
    dx = np.maximum(np.maximum(lo - points, points - hi), 0.0)
    return float(np.min(np.hypot(dx, offset.imag)))


def term_window(term):
    """Range of the real part sum c_j t_j over t in [0, 1]^E."""
    coefficients = [c for _, c in term.arg.coefficients]
    return (float(sum(c for c in coefficients if c < 0)), float(sum(c for c in coefficients if c > 0)))


def lattice_distance(action: SymbolicAction, lc: LogColoring) -> dict:
    """Smallest singular distance of every dilog term over all lattice points."""
    N = action.N
    distances = {}
    for term in action.dilog_terms:
        segments = [segment for segment, _ in term.arg.coefficients]
        smallest = np.inf
        for n in itertools.product(range(N), repeat=len(segments)):
            values = {segment: (lc.beta[lc.index(segment)] + j) / N for segment, j in zip(segments, n)}
            smallest = min(smallest, float(singular_distance(N, term.arg.evaluate(values))))
        distances[term.label()] = smallest
    return distances


def contour_distances(action: SymbolicAction, lc: LogColoring) -> dict:
    N = action.N
    base = action.values(lc.beta / N)
    return {term.label(): contour_distance(N, complex(term.arg.evaluate(base)), term_window(term))
            for term in action.dilog_terms}


def pole_distance(D: OpenDiagram, lc: LogColoring, N: int, action: SymbolicAction = None) -> dict:
    """Minimal distance of the phi_N arguments to the singular set, over the
    lattice points of the state sum and along the real contour of the state
    integrals."""
    action = action or quantum_action(D, lc, N)
    lattice = lattice_distance(action, lc)
    contour = contour_distances(action, lc)
    report = {
        'lattice': min(lattice.values()) if lattice else np.inf,
        'contour': min(contour.values()) if contour else np.inf,
        'lattice_terms': lattice,
        'contour_terms': contour,
    }
    logger.debug('%s N=%d: pole distance lattice %.3g contour %.3g', D.name, N,
                 report['lattice'], report['contour'])
    return report
