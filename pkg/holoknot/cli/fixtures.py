"""Builtin diagram and representation fixtures.

The representations are two-generator ones: the boundary-parabolic
representation of the figure-eight knot and a generic one of the trefoil.
"""
import json
import logging
import os

import numpy as np

from holoknot.cli.cli_error import ReportError
from holoknot.coloring.representation import Representation, dump_representation
from holoknot.coloring.segment_coloring import solve_two_generator
from holoknot.diagram.builtin import BUILTIN_NAMES, builtin, builtin_document
from holoknot.diagram.diagram import OpenDiagram

logger = logging.getLogger(__name__)

# m, starting w for the closure solve, u0
REPRESENTATION_SEEDS = {
    'figure8': (1.0 + 0j, 0.5 + 0.8j, (1.0, 0.3 + 0.2j)),
    'trefoil': (1.2 + 0.3j, -0.8 + 0.1j, (1.0, 0.3 + 0.2j)),
}


def builtin_representation(D: OpenDiagram) -> Representation:
    try:
        m, w0, u0 = REPRESENTATION_SEEDS[D.name]
    except KeyError:
        raise ReportError('no builtin representation for diagram {0!r}'.format(D.name))
    _, coloring = solve_two_generator(D, m, w0)
    return Representation(coloring, np.array(u0, dtype=complex))


def _write_json(path, document):
    try:
        with open(path, 'w', encoding='utf-8') as file:
            json.dump(document, file, indent=2, sort_keys=True)
            file.write('\n')
    except OSError as error:
        raise ReportError('cannot write fixture {0}: {1}'.format(path, error))


def emit_builtin_fixtures(directory) -> list:
    """Write every builtin diagram and its representation document to ``directory``."""
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as error:
        raise ReportError('cannot create fixture directory {0}: {1}'.format(directory, error))

    paths = []
    for name in BUILTIN_NAMES:
        diagram_path = os.path.join(directory, '{0}.json'.format(name))
        _write_json(diagram_path, builtin_document(name))
        paths.append(diagram_path)

        representation_path = os.path.join(directory, '{0}_rep.json'.format(name))
        _write_json(representation_path, dump_representation(builtin_representation(builtin(name))))
        paths.append(representation_path)
    logger.info('wrote %d fixtures to %s', len(paths), directory)
    return paths
