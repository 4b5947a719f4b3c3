"""Segment equations.

At a crossing of sign e the segment parameters give, through the shapes,
one parameter per crossing end::

    a1  = m^e (1 - zW) / (1 - zN)        a2' = m^-e (1 - zE) / (1 - zN)
    a2  = m^-e (1 - zS) / (1 - zW)       a1' = m^e (1 - zS) / (1 - zE)

Every segment receives a_head at the crossing it runs into and a_tail at
the crossing it leaves. The segment equations are a_tail / a_head = 1.
"""
import logging
from typing import Dict, Tuple

import numpy as np

from holoknot.core.config import Tolerances
from holoknot.diagram.diagram import OpenDiagram, Role
from holoknot.geometry.geometry_error import DegenerateShapeError
from holoknot.geometry.shapes import crossing_shapes, segment_values, CORNERS

logger = logging.getLogger(__name__)

# end -> (m exponent / e, numerator corner, denominator corner)
_A_FORMULAS = {
    Role.S1: (1, 'W', 'N'),
    Role.S2P: (-1, 'E', 'N'),
    Role.S2: (-1, 'S', 'W'),
    Role.S1P: (1, 'S', 'E'),
}

# corner -> {end: exponent / e} of the monomial z = m^(...) prod b^(...)
_MONOMIALS = {
    'N': {Role.S2P: 1, Role.S1: -1},
    'S': {Role.S2: 1, Role.S1P: -1},
    'W': {Role.S2: 1, Role.S1: -1},
    'E': {Role.S2P: 1, Role.S1P: -1},
}


def crossing_a_values(sign, m, shapes, tolerance=0.0) -> Dict[Role, complex]:
    for corner in CORNERS:
        if abs(1 - shapes[corner]) <= tolerance:
            raise DegenerateShapeError('shape {0} is 1'.format(corner), corner=corner)
    return {role: m ** (k * sign) * (1 - shapes[top]) / (1 - shapes[bottom])
            for role, (k, top, bottom) in _A_FORMULAS.items()}


def segment_a_values(D: OpenDiagram, b, m, tolerance=0.0) -> Dict[str, Tuple[complex, complex]]:
    """(a_head, a_tail) for every internal segment."""
    values = segment_values(D, b)
    per_end = {}
    for crossing in D.crossings:
        shapes = crossing_shapes(crossing.sign, m, *(values[crossing.segment(role)] for role in Role))
        try:
            a = crossing_a_values(crossing.sign, m, shapes, tolerance)
        except DegenerateShapeError as error:
            raise DegenerateShapeError(str(error), crossing.id, error.corner) from error
        for role, value in a.items():
            per_end[(crossing.id, role)] = value
    return {segment: (per_end[D.head(segment)], per_end[D.tail(segment)]) for segment in D.E}


def segment_residuals(b, m, D: OpenDiagram, tolerance=0.0) -> np.ndarray:
    """a_tail / a_head - 1 for every internal segment, ordered like D.E."""
    a = segment_a_values(D, b, m, tolerance)
    return np.array([a[segment][1] / a[segment][0] - 1 for segment in D.E], dtype=complex)


class SegmentEquationSystem:
    """Residual map b -> (a_tail / a_head - 1) over the internal segments with
    its analytic Jacobian. The boundary parameter is fixed to 1."""

    def __init__(self, D: OpenDiagram, m: complex):
        self.diagram = D
        self.m = complex(m)
        self._position = {segment: i for i, segment in enumerate(D.E)}
        # per segment equation: (crossing, numerator corner, denominator corner, power) at both ends
        self._rows = []
        for segment in D.E:
            head, tail = D.head(segment), D.tail(segment)
            self._rows.append((self._end_terms(head, -1), self._end_terms(tail, 1)))

    def _end_terms(self, end, power):
        crossing_id, role = end
        _, top, bottom = _A_FORMULAS[role]
        return crossing_id, top, bottom, power

    def _exponents(self, crossing_id, corner):
        """d log z / d log b_j for the internal segments, as a dense vector."""
        crossing = self.diagram.crossing(crossing_id)
        gradient = np.zeros(len(self.diagram.E))
        for role, exponent in _MONOMIALS[corner].items():
            segment = crossing.segment(role)
            if segment in self._position:
                gradient[self._position[segment]] += exponent * crossing.sign
        return gradient

    def __len__(self):
        return len(self.diagram.E)

    def residual(self, b) -> np.ndarray:
        return segment_residuals(np.asarray(b, dtype=complex), self.m, self.diagram)

    def jacobian(self, b) -> np.ndarray:
        """d residual_i / d b_j."""
        b = np.asarray(b, dtype=complex)
        values = segment_values(self.diagram, b)
        shapes = {}
        for crossing in self.diagram.crossings:
            z = crossing_shapes(crossing.sign, self.m, *(values[crossing.segment(role)] for role in Role))
            for corner in CORNERS:
                shapes[(crossing.id, corner)] = z[corner]

        ratios = self.residual(b) + 1
        J = np.zeros((len(self), len(self)), dtype=complex)
        for i, ends in enumerate(self._rows):
            d_log = np.zeros(len(self), dtype=complex)
            for crossing_id, top, bottom, power in ends:
                for corner, s in ((top, 1), (bottom, -1)):
                    z = shapes[(crossing_id, corner)]
                    # d log(1 - z) = -z / (1 - z) d log z
                    d_log += power * s * (-z / (1 - z)) * self._exponents(crossing_id, corner)
            J[i] = ratios[i] * d_log / b
        return J

    def max_residual(self, b) -> float:
        return float(np.max(np.abs(self.residual(b)))) if len(self) else 0.0

    def is_solution(self, b, tolerance=Tolerances.newton_residual.default) -> bool:
        return self.max_residual(b) <= tolerance


def default_pins(D: OpenDiagram) -> Tuple[str, ...]:
    """The first two internal segments at the crossing the outgoing boundary leaves."""
    crossing_id, _ = D.tail(D.boundary_out)
    crossing = D.crossing(crossing_id)
    found = []
    for role in (Role.S1, Role.S2, Role.S1P, Role.S2P):
        segment = crossing.segment(role)
        if not D.is_boundary(segment) and segment not in found:
            found.append(segment)
    for segment in D.E:
        if len(found) >= 2:
            break
        if segment not in found:
            found.append(segment)
    return tuple(found[:2])
