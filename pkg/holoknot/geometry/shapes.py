"""Shape parameters of the four tetrahedra at every crossing.

For a crossing of sign e with segment parameters b1, b2, b1', b2'::

    zN = (b2'/b1)^e    zS = (b2/b1')^e    zW = (b2/(m b1))^e    zE = (m b2'/b1')^e
"""
from collections.abc import Mapping
from typing import Dict, Tuple

import numpy as np

from holoknot.core.config import Tolerances
from holoknot.diagram.diagram import OpenDiagram, Role
from holoknot.geometry.geometry_error import DegenerateShapeError

CORNERS = ('N', 'S', 'W', 'E')


def segment_values(D: OpenDiagram, b) -> Dict[str, complex]:
    """Segment parameters including the boundary, which defaults to 1."""
    b = getattr(b, 'b', b)
    if not isinstance(b, Mapping):
        b = dict(zip(D.E, np.asarray(b, dtype=complex)))
    values = {segment: complex(value) for segment, value in b.items()}
    boundary = values.get(D.boundary_in, values.get(D.boundary_out, 1.0))
    values[D.boundary_in] = values[D.boundary_out] = boundary
    missing = [segment for segment in D.E if segment not in values]
    if missing:
        raise DegenerateShapeError('no segment parameter for {0}'.format(', '.join(missing)))
    return values


def crossing_shapes(sign, m, b1, b2, b1p, b2p) -> Dict[str, complex]:
    for value in (b1, b2, b1p, b2p):
        if value == 0 or not np.isfinite(value):
            raise DegenerateShapeError('segment parameter {0} at a crossing'.format(value))
    return {
        'N': (b2p / b1) ** sign,
        'S': (b2 / b1p) ** sign,
        'W': (b2 / (m * b1)) ** sign,
        'E': (m * b2p / b1p) ** sign,
    }


def edge_pairs(z: complex) -> Tuple[complex, complex, complex]:
    """The three edge pair shapes z, 1/(1 - z), 1 - 1/z of one tetrahedron."""
    return z, 1.0 / (1.0 - z), 1.0 - 1.0 / z


class ShapeParameters(Mapping):
    """Shapes keyed by (crossing id, corner)."""

    def __init__(self, diagram: OpenDiagram, m: complex, shapes: Dict[Tuple[str, str], complex]):
        self.diagram = diagram
        self.m = complex(m)
        self._shapes = shapes

    def __getitem__(self, key):
        return self._shapes[key]

    def __iter__(self):
        return iter(self._shapes)

    def __len__(self):
        return len(self._shapes)

    def at(self, crossing_id: str) -> Dict[str, complex]:
        return {corner: self._shapes[(crossing_id, corner)] for corner in CORNERS}

    def degenerate(self, tolerance=Tolerances.singular_distance.default):
        """Tetrahedra whose shape is within ``tolerance`` of 0, 1 or infinity."""
        found = []
        for key, z in self._shapes.items():
            if not np.isfinite(z) or abs(z) <= tolerance or abs(z - 1) <= tolerance \
                    or abs(z) >= 1.0 / tolerance:
                found.append(key)
        return found

    def all_edge_pairs(self) -> Dict[Tuple[str, str], Tuple[complex, complex, complex]]:
        return {key: edge_pairs(z) for key, z in self._shapes.items()}

    def to_document(self):
        return {'{0}.{1}'.format(*key): z for key, z in self._shapes.items()}


def shape_parameters(b, m: complex, D: OpenDiagram) -> ShapeParameters:
    """Shapes from segment parameters ``b`` (a mapping, a ParameterSet or a vector over E)."""
    values = segment_values(D, b)
    shapes = {}
    for crossing in D.crossings:
        corner_shapes = crossing_shapes(crossing.sign, m, *(values[crossing.segment(role)]
                                                            for role in Role))
        for corner, z in corner_shapes.items():
            shapes[(crossing.id, corner)] = complex(z)
    return ShapeParameters(D, m, shapes)
