"""Decorated SL2 colorings of open diagrams.

Over strands keep their decorated matrix. The under strand of a positive
crossing leaves as ``qn(s2, s1)``, of a negative crossing as
``qn_inv(s1, s2)``.
"""
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from scipy.optimize import least_squares

from holoknot.coloring.coloring_error import (ColoringError, CrossingRelationError,
                                              RepresentationSolveError)
from holoknot.coloring.decorated_matrix import DecoratedMatrix, qn, qn_inv
from holoknot.core.config import Tolerances
from holoknot.diagram.diagram import OpenDiagram, Role
from lib.numeric import projective_distance, sl2_inverse

logger = logging.getLogger(__name__)


def _under_out(crossing, incoming, over):
    return qn(incoming, over) if crossing.sign > 0 else qn_inv(incoming, over)


def _under_in(crossing, outgoing, over):
    return qn_inv(outgoing, over) if crossing.sign > 0 else qn(outgoing, over)


class SegmentColoring(Mapping):
    """Decorated matrices on every segment of a diagram, boundary included."""

    def __init__(self, diagram: OpenDiagram, colors: Dict[str, DecoratedMatrix]):
        self.diagram = diagram
        self._colors = dict(colors)
        missing = [segment for segment in self._segments() if segment not in self._colors]
        if missing:
            raise ColoringError('no decorated matrix for segments {0}'.format(', '.join(missing)))

    def _segments(self):
        D = self.diagram
        return (D.boundary_in,) + D.E + (D.boundary_out,)

    def __getitem__(self, segment):
        return self._colors[segment]

    def __iter__(self):
        return iter(self._segments())

    def __len__(self):
        return len(self._colors)

    @property
    def m(self) -> complex:
        return self._colors[self.diagram.boundary_in].m

    def relation_residuals(self) -> Dict[str, float]:
        residuals = {}
        for crossing in self.diagram.crossings:
            over_in, over_out = (self[crossing.segment(role)] for role in crossing.over_roles)
            under_in, under_out = (self[crossing.segment(role)] for role in crossing.under_roles)
            expected = _under_out(crossing, under_in, over_in)
            residuals[crossing.id] = max(over_out.distance(over_in), under_out.distance(expected))
        return residuals

    def boundary_residual(self) -> float:
        D = self.diagram
        return self[D.boundary_out].distance(self[D.boundary_in])

    def validate(self, tolerance=Tolerances.residual.default):
        for segment in self:
            self[segment].validate(tolerance)
        for crossing_id, residual in self.relation_residuals().items():
            if residual > tolerance:
                raise CrossingRelationError(crossing_id, residual)
        residual = self.boundary_residual()
        if residual > tolerance:
            raise ColoringError('boundary segments carry different decorated matrices '
                                '(residual {0:.3g})'.format(residual))
        return self

    def conjugated(self, h) -> 'SegmentColoring':
        """Segment part of a type A gauge transformation by h."""
        h = np.asarray(h, dtype=complex)
        h_inv = sl2_inverse(h)
        return SegmentColoring(self.diagram, {
            segment: DecoratedMatrix(h_inv @ color.g @ h, color.v @ h, color.m)
            for segment, color in self._colors.items()})


def expand_arc_coloring(D: OpenDiagram, arcs, tolerance=Tolerances.residual.default) -> SegmentColoring:
    """One decorated matrix per Wirtinger arc, spread over its segments and checked.

    ``arcs`` may be keyed by the arc name or by any segment of the arc.
    """
    by_arc = {}
    for key, color in arcs.items():
        try:
            name = D.arc_of(key)
        except KeyError:
            raise ColoringError('{0!r} is not a segment of {1}'.format(key, D.name))
        if name in by_arc:
            raise ColoringError('arc {0} is colored twice'.format(name))
        by_arc[name] = color.validate(tolerance)

    missing = [name for name in D.arcs() if name not in by_arc]
    if missing:
        raise ColoringError('arcs without a decorated matrix: {0}'.format(', '.join(missing)))

    colors = {segment: by_arc[name] for name, segments in D.arcs().items() for segment in segments}
    return SegmentColoring(D, colors).validate(tolerance)


def propagate_arc_coloring(D: OpenDiagram, seeds) -> SegmentColoring:
    """Fill in a coloring from decorated matrices on some arcs.

    Over arcs are constant, under strands are pushed forward and backward
    through crossings whose over strand is known. The crossing relations
    not used by the propagation are left unchecked; call
    :meth:`SegmentColoring.validate` on the result.
    """
    arc_of = {segment: name for name, segments in D.arcs().items() for segment in segments}
    arcs = D.arcs()
    colors = {}

    def assign(segment, color):
        for item in arcs[arc_of[segment]]:
            colors.setdefault(item, color)

    for key, color in seeds.items():
        if key not in arc_of:
            raise ColoringError('{0!r} is not a segment of {1}'.format(key, D.name))
        assign(key, color)

    progress = True
    while progress:
        progress = False
        for crossing in D.crossings:
            over = colors.get(crossing.segment(crossing.over_roles[0]))
            if over is None:
                continue
            under_in, under_out = (crossing.segment(role) for role in crossing.under_roles)
            if under_in in colors and under_out not in colors:
                assign(under_out, _under_out(crossing, colors[under_in], over))
                progress = True
            elif under_out in colors and under_in not in colors:
                assign(under_in, _under_in(crossing, colors[under_out], over))
                progress = True

    missing = [segment for segment in arc_of if segment not in colors]
    if missing:
        raise ColoringError('seeded arcs do not determine segments {0}'.format(', '.join(missing)))
    return SegmentColoring(D, colors)


_FRAME = np.array([[1.0, 0.5 + 0.25j], [0.3 - 0.4j, 1.0]], dtype=complex)

#: Non-triangular frame for solved two generator colorings. In the triangular
#: frame some eigenlines lie on a coordinate axis and their b vanish for every
#: shadow coloring.
GENERIC_FRAME = _FRAME / np.sqrt(np.linalg.det(_FRAME))

_SOLVE_ROUNDS = 3


def two_generator_matrices(m: complex, w: complex) -> Tuple[DecoratedMatrix, DecoratedMatrix]:
    """Upper and lower triangular generators with distinguished eigenvalue m."""
    alpha = DecoratedMatrix([[m, 1.0], [0.0, 1.0 / m]], [0.0, 1.0], m)
    beta = DecoratedMatrix([[1.0 / m, 0.0], [w, m]], [1.0, 0.0], m)
    return alpha, beta


def two_generator_coloring(D: OpenDiagram, m: complex, w: complex) -> SegmentColoring:
    """Propagate the two triangular generators from the first two arcs of D."""
    names = list(D.arcs())
    if len(names) < 2:
        raise ColoringError('{0} has fewer than two arcs'.format(D.name))
    alpha, beta = two_generator_matrices(m, w)
    return propagate_arc_coloring(D, {names[0]: alpha, names[1]: beta})


def relation_defects(coloring: SegmentColoring) -> np.ndarray:
    """Entrywise defects of every crossing relation and the boundary condition."""
    defects = []
    D = coloring.diagram
    for crossing in D.crossings:
        over_in, over_out = (coloring[crossing.segment(role)] for role in crossing.over_roles)
        under_in, under_out = (coloring[crossing.segment(role)] for role in crossing.under_roles)
        defects.append((over_out.g - over_in.g).ravel())
        defects.append((under_out.g - _under_out(crossing, under_in, over_in).g).ravel())
    defects.append((coloring[D.boundary_out].g - coloring[D.boundary_in].g).ravel())
    return np.concatenate(defects)


def relative_defect(coloring: SegmentColoring) -> float:
    """Largest relation defect relative to the largest matrix entry."""
    scale = max(1.0, max(float(np.max(np.abs(color.g))) for color in coloring.values()))
    return float(np.max(np.abs(relation_defects(coloring)))) / scale


def solve_two_generator(D: OpenDiagram, m: complex, w0: complex,
                        tolerance=Tolerances.residual.default,
                        frame=GENERIC_FRAME) -> Tuple[complex, SegmentColoring]:
    """Solve the Wirtinger relations for the lower left entry w of the second generator.

    w is the entry in the triangular frame; the returned coloring is
    conjugated into ``frame`` (pass ``None`` to keep the triangular one).

    :raises RepresentationSolveError: when Levenberg-Marquardt stalls above
        the tolerance.
    """

    def residual(x):
        defects = relation_defects(two_generator_coloring(D, m, complex(x[0], x[1])))
        return np.concatenate([defects.real, defects.imag])

    x = np.array([w0.real, w0.imag])
    for _ in range(_SOLVE_ROUNDS):
        x = least_squares(residual, x, method='lm', xtol=1e-15, ftol=1e-15, gtol=1e-15).x
        coloring = two_generator_coloring(D, m, complex(x[0], x[1]))
        worst = relative_defect(coloring)
        if worst <= tolerance:
            break
    w = complex(x[0], x[1])
    logger.debug('%s: two generator solve m=%s w=%s residual %.3g', D.name, m, w, worst)
    if worst > tolerance:
        raise RepresentationSolveError('{0}: no two generator representation near w = {1} '
                                       '(residual {2:.3g})'.format(D.name, w0, worst))
    if frame is not None:
        coloring = coloring.conjugated(frame)
    return w, coloring.validate(tolerance)


@dataclass(frozen=True)
class PinchReport:
    distances: Dict[str, float]
    pinched: Tuple[str, ...]

    @property
    def any(self) -> bool:
        return bool(self.pinched)


def is_pinched(D: OpenDiagram, coloring: SegmentColoring,
               tolerance=Tolerances.projective.default) -> PinchReport:
    """Crossings whose two incoming eigenlines agree projectively."""
    distances = {}
    for crossing in D.crossings:
        distances[crossing.id] = projective_distance(coloring[crossing.segment(Role.S1)].v,
                                                     coloring[crossing.segment(Role.S2)].v)
    pinched = tuple(crossing_id for crossing_id, distance in distances.items()
                    if distance < tolerance)
    return PinchReport(distances, pinched)
