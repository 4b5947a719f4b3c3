"""Shadow colorings: vectors on regions with u_below = g u_above across every segment."""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from holoknot.coloring.coloring_error import (ShadowClosureError, GaugeError,
                                              InadmissibleError)
from holoknot.coloring.segment_coloring import SegmentColoring
from holoknot.core.config import Tolerances
from holoknot.diagram.diagram import OpenDiagram
from lib.numeric import sl2_inverse

logger = logging.getLogger(__name__)


class ShadowColoring:
    """Region vectors over a segment coloring.

    ``bounds`` holds, per region, the product of matrix norms along the
    propagation path times |u0|; rounding errors of u_j scale with it.
    """

    def __init__(self, base: SegmentColoring, u: Dict[str, np.ndarray], base_region: str,
                 bounds: Optional[Dict[str, float]] = None):
        self.base = base
        self.u = {region: np.asarray(vector, dtype=complex) for region, vector in u.items()}
        self.base_region = base_region
        self.bounds = dict(bounds) if bounds is not None else {}

    @property
    def diagram(self) -> OpenDiagram:
        return self.base.diagram

    @property
    def m(self) -> complex:
        return self.base.m

    @property
    def u0(self) -> np.ndarray:
        return self.u[self.base_region]

    def closure_residuals(self) -> Dict[str, float]:
        """|u_below - g u_above| relative to the sizes of both sides."""
        D = self.diagram
        residuals = {}
        for segment in (D.boundary_in,) + D.E + (D.boundary_out,):
            above_id, below_id = D.above(segment), D.below(segment)
            above, below = self.u[above_id], self.u[below_id]
            g = self.base[segment].g
            norm = float(np.linalg.norm(g, 2))
            defect = np.linalg.norm(below - g @ above)
            scale = max(1.0, float(np.linalg.norm(below)), norm * float(np.linalg.norm(above)),
                        self.bounds.get(below_id, 0.0), norm * self.bounds.get(above_id, 0.0))
            residuals[segment] = float(defect / scale)
        return residuals


def _segment_edges(D: OpenDiagram):
    for segment in (D.boundary_in,) + D.E:
        yield segment, D.above(segment), D.below(segment)


def propagate_shadow(D: OpenDiagram, coloring: SegmentColoring, u0,
                     base_region: Optional[str] = None,
                     tolerance=Tolerances.residual.default) -> ShadowColoring:
    """Breadth first propagation of u0 from ``base_region`` over the dual graph.

    The default base region is the one above the incoming boundary segment.

    :raises ShadowClosureError: if some segment relation fails after
        propagation, which means the segment coloring was invalid.
    """
    u0 = np.asarray(u0, dtype=complex).reshape(2)
    if not np.any(u0):
        raise ShadowClosureError('u0 must be nonzero')
    if base_region is None:
        base_region = D.above(D.boundary_in)
    if base_region not in {region.id for region in D.regions()}:
        raise ShadowClosureError('unknown base region {0!r}'.format(base_region))

    neighbours = {region.id: [] for region in D.regions()}
    for segment, above, below in _segment_edges(D):
        g = coloring[segment].g
        neighbours[above].append((below, g))
        neighbours[below].append((above, sl2_inverse(g)))

    u = {base_region: u0}
    bounds = {base_region: float(np.linalg.norm(u0))}
    queue = deque([base_region])
    while queue:
        region = queue.popleft()
        for other, g in neighbours[region]:
            if other not in u:
                u[other] = g @ u[region]
                bounds[other] = float(np.linalg.norm(g, 2)) * bounds[region]
                queue.append(other)

    shadow = ShadowColoring(coloring, u, base_region, bounds)
    for segment, residual in shadow.closure_residuals().items():
        if residual > tolerance:
            raise ShadowClosureError('shadow does not close across {0} (residual {1:.3g})'.format(
                segment, residual))
    return shadow


@dataclass(frozen=True)
class ParameterSet:
    """Region parameters a_j and segment parameters b_i.

    Parameters that vanish or blow up are listed in ``inadmissible`` rather
    than raised; unusable ``b`` values are stored as complex infinity.
    """
    a: Dict[str, complex]
    b: Dict[str, complex]
    boundary: str
    inadmissible: Tuple[str, ...]
    tolerance: float = Tolerances.residual.default

    @property
    def admissible(self) -> bool:
        return not self.inadmissible

    @property
    def b_boundary(self) -> complex:
        return self.b[self.boundary]

    @property
    def normalized(self) -> bool:
        return self.admissible and abs(self.b_boundary - 1) <= self.tolerance

    def b_vector(self, segments) -> np.ndarray:
        return np.array([self.b[segment] for segment in segments], dtype=complex)


_INFINITY = complex(np.inf, 0.0)


def _is_bad(value, scale, tolerance):
    return not np.isfinite(value) or abs(value) <= tolerance * scale


def parameters(shadow: ShadowColoring, tolerance=Tolerances.residual.default) -> ParameterSet:
    D = shadow.diagram
    a, b, bad = {}, {}, []
    for region_id in sorted(shadow.u):
        vector = shadow.u[region_id]
        a[region_id] = complex(vector[0])
        if _is_bad(a[region_id], np.linalg.norm(vector), tolerance):
            bad.append(region_id)

    for segment in (D.boundary_in,) + D.E + (D.boundary_out,):
        v = shadow.base[segment].v
        above = shadow.u[D.above(segment)]
        denominator = v @ above
        scale = np.linalg.norm(v) * np.linalg.norm(above)
        if abs(denominator) <= tolerance * scale:
            b[segment] = _INFINITY
            bad.append(segment)
            continue
        b[segment] = complex(-v[1] / denominator)
        if abs(v[1]) <= tolerance * np.linalg.norm(v):
            bad.append(segment)

    if bad:
        logger.debug('%s: inadmissible parameters %s', D.name, bad)
    return ParameterSet(a, b, D.boundary_in, tuple(bad), tolerance)


def gauge(shadow: ShadowColoring, kind: str, h, tolerance=Tolerances.residual.default) -> ShadowColoring:
    """Type A conjugates segment colors and maps u_j to h^-1 u_j; type B keeps the
    segment colors and re-propagates from h^-1 u0."""
    h = np.asarray(h, dtype=complex).reshape(2, 2)
    det = np.linalg.det(h)
    if abs(det - 1) > tolerance:
        raise GaugeError('gauge matrix has determinant {0}'.format(det))
    h_inv = sl2_inverse(h)

    if kind == 'A':
        u = {region: h_inv @ vector for region, vector in shadow.u.items()}
        growth = float(np.linalg.norm(h, 2) * np.linalg.norm(h_inv, 2))
        bounds = {region: growth * bound for region, bound in shadow.bounds.items()}
        return ShadowColoring(shadow.base.conjugated(h), u, shadow.base_region, bounds)
    if kind == 'B':
        return propagate_shadow(shadow.diagram, shadow.base, h_inv @ shadow.u0,
                                shadow.base_region, tolerance)
    raise GaugeError('gauge kind must be "A" or "B", got {0!r}'.format(kind))


def normalize(shadow: ShadowColoring, tolerance=Tolerances.residual.default) -> ShadowColoring:
    """Rescale every u_j by b_boundary so the boundary segment parameter becomes 1."""
    scale = parameters(shadow, tolerance).b_boundary
    if not np.isfinite(scale) or abs(scale) <= tolerance:
        raise InadmissibleError('boundary segment parameter is {0}'.format(scale))
    u = {region: scale * vector for region, vector in shadow.u.items()}
    bounds = {region: abs(scale) * bound for region, bound in shadow.bounds.items()}
    return ShadowColoring(shadow.base, u, shadow.base_region, bounds)


@dataclass(frozen=True)
class UnitCircleReport:
    avoids: bool
    margin: float
    worst: Tuple[str, str]


def avoids_unit_circle(shapes, margin=Tolerances.unit_circle_margin.default) -> UnitCircleReport:
    """Whether every shape parameter keeps ``margin`` away from |z| = 1.

    ``shapes`` is anything with ``items()`` yielding ((crossing, corner), z).
    """
    worst, worst_margin = ('', ''), np.inf
    for key, z in shapes.items():
        distance = abs(abs(z) - 1.0)
        if distance < worst_margin:
            worst, worst_margin = key, distance
    return UnitCircleReport(bool(worst_margin > margin), float(worst_margin), worst)
