"""Builtin open diagrams.

The figure-eight diagram carries the segment labels t1..t7 and four
cap_neg turnbacks, two around each of the crossings c2 and c3, so its
quantum action reads term by term::

    (1/N) [ L+(0, t5, t1, t6) + L+(t4 + 1/N - 1, t1, t5 + 1/N - 1, t2)
          - L-(t3 + 1/N - 1, t6, t4 + 1/N - 1, t7) + L-(t7, t2, 0, t3) ]

The minus sign in front of the third block is recorded as the crossing
weight and only honoured by the printed sign convention.
"""
import copy

from holoknot.diagram.diagram import parse_diagram, OpenDiagram
from holoknot.diagram.diagram_error import UnknownBuiltinError

_DART_ORDER = ['s2p', 's1', 's2', 's1p']

FIGURE8 = {
    'name': 'figure8',
    'crossings': [
        {'id': 'c1', 'sign': 1, 's1': 'in', 's2': 't5', 's1p': 't1', 's2p': 't6'},
        {'id': 'c2', 'sign': 1, 's1': 't4', 's2': 't1', 's1p': 't5', 's2p': 't2'},
        {'id': 'c3', 'sign': -1, 's1': 't3', 's2': 't6', 's1p': 't4', 's2p': 't7', 'weight': -1},
        {'id': 'c4', 'sign': -1, 's1': 't7', 's2': 't2', 's1p': 'out', 's2p': 't3'},
    ],
    'turnbacks': [
        {'kind': 'cap_neg', 'from': 't3', 'to': 'c3'},
        {'kind': 'cap_neg', 'from': 't4', 'to': 'c3'},
        {'kind': 'cap_neg', 'from': 't4', 'to': 'c2'},
        {'kind': 'cap_neg', 'from': 't5', 'to': 'c2'},
    ],
    'boundary': {'in': 'in', 'out': 'out'},
    'segments': ['t1', 't2', 't3', 't4', 't5', 't6', 't7'],
    'rotation': {crossing: _DART_ORDER for crossing in ('c1', 'c2', 'c3', 'c4')},
}

TREFOIL = {
    'name': 'trefoil',
    'crossings': [
        {'id': 'x1', 'sign': 1, 's1': 'in', 's2': 't3', 's1p': 't1', 's2p': 't4'},
        {'id': 'x2', 'sign': 1, 's1': 't4', 's2': 't1', 's1p': 't5', 's2p': 't2'},
        {'id': 'x3', 'sign': 1, 's1': 't2', 's2': 't5', 's1p': 't3', 's2p': 'out'},
    ],
    # t3 runs back from x3 to x1 over the top: a cap, then a cup with no shift
    'turnbacks': [
        {'kind': 'cap_pos', 'from': 't3', 'to': 'x1'},
        {'kind': 'cup_pos', 'from': 't3', 'to': 'x1'},
    ],
    'boundary': {'in': 'in', 'out': 'out'},
    'segments': ['t1', 't2', 't3', 't4', 't5'],
    'rotation': {crossing: _DART_ORDER for crossing in ('x1', 'x2', 'x3')},
}

_BUILTINS = {
    'figure8': FIGURE8,
    'trefoil': TREFOIL,
}

BUILTIN_NAMES = tuple(sorted(_BUILTINS))


def builtin_document(name: str) -> dict:
    try:
        return copy.deepcopy(_BUILTINS[name])
    except KeyError:
        raise UnknownBuiltinError('unknown builtin diagram {0!r}, expected one of {1}'.format(
            name, ', '.join(BUILTIN_NAMES)))


def builtin(name: str) -> OpenDiagram:
    return parse_diagram(builtin_document(name))
