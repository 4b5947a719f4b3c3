"""Representation documents.

::

    {
      "diagram": "figure8",
      "m": [1.0, 0.0],
      "arcs": {"in": {"g": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]], "v": [[0, 0], [1, 0]]}, ...},
      "u0": [[1.0, 0.0], [0.3, 0.2]],
      "base_region": "r0"
    }

Complex numbers are [re, im] pairs. ``m`` is optional and checked against
the eigenvalue implied by every arc.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from holoknot.coloring.coloring_error import ColoringError
from holoknot.coloring.decorated_matrix import DecoratedMatrix
from holoknot.coloring.segment_coloring import SegmentColoring, expand_arc_coloring
from holoknot.core.config import Tolerances
from holoknot.diagram.diagram import OpenDiagram
from lib.numeric import from_pair, to_pair, vector_from_pairs


@dataclass
class Representation:
    coloring: SegmentColoring
    u0: np.ndarray
    base_region: Optional[str] = None

    @property
    def m(self) -> complex:
        return self.coloring.m


def load_representation(document, D: OpenDiagram,
                        tolerance=Tolerances.residual.default) -> Representation:
    if not isinstance(document, dict) or not isinstance(document.get('arcs'), dict):
        raise ColoringError('representation document needs an "arcs" object')
    if document.get('diagram') not in (None, D.name):
        raise ColoringError('representation is for {0!r}, not {1!r}'.format(
            document['diagram'], D.name))

    arcs = {name: DecoratedMatrix.from_document(entry) for name, entry in document['arcs'].items()}
    if 'm' in document:
        m = from_pair(document['m'])
        for name, color in arcs.items():
            if abs(color.m - m) > tolerance * max(1.0, abs(m)):
                raise ColoringError('arc {0} has eigenvalue {1}, document says {2}'.format(
                    name, color.m, m))
    coloring = expand_arc_coloring(D, arcs, tolerance)

    try:
        u0 = vector_from_pairs(document.get('u0', [[1.0, 0.0], [0.0, 0.0]]))
    except (TypeError, ValueError) as error:
        raise ColoringError('malformed u0: {0}'.format(error))
    return Representation(coloring, u0, document.get('base_region'))


def dump_representation(representation: Representation) -> dict:
    D = representation.coloring.diagram
    document = {
        'diagram': D.name,
        'm': to_pair(representation.m),
        'arcs': {name: representation.coloring[name].to_document() for name in D.arcs()},
        'u0': [to_pair(entry) for entry in representation.u0],
    }
    if representation.base_region is not None:
        document['base_region'] = representation.base_region
    return document
