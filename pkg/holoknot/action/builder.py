"""Construction of the quantum and classical actions of an open diagram.

For a crossing of sign e with end variables (t1, t2, t1', t2') the quantum
crossing function is::

    e = +1:  phi(t2' - t1) + phi(t2 - t1') - phi(t2 - t1 - mu/N + 1 - 1/N) - phi(t2' - t1' + mu/N)
    e = -1: -phi(t1 - t2' + 1 - 1/N) - phi(t1' - t2 + 1 - 1/N) + phi(t1 - t2 + mu/N)
            + phi(t1' - t2' - mu/N + 1 - 1/N)

plus 2 pi i e (1 - N)(t2 - t1 - mu/N) + 2 pi i e mu (t2 + t1' - t1 - t2'). The
classical crossing function replaces phi by l, drops mu, turns 1 - 1/N into
1 and has the linear part -2 pi i e (t2 - t1). Boundary variables are 0 and
turnbacks shift the end they lead into by sigma (1 - 1/N), or sigma.
"""
import logging
from collections import defaultdict
from typing import Optional

import numpy as np

from holoknot.action.symbolic import (ActionTerm, AffineArg, CrossingBlock, LinearForm,
                                      Occurrence, SignConvention, SymbolicAction, TermKind)
from holoknot.diagram.diagram import OpenDiagram, Role

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi

# (sign, first end, second end, mu/N coefficient, carries the 1 - 1/N offset)
_SLOTS = {
    1: ((1, Role.S2P, Role.S1, 0, False),
        (1, Role.S2, Role.S1P, 0, False),
        (-1, Role.S2, Role.S1, -1, True),
        (-1, Role.S2P, Role.S1P, 1, False)),
    -1: ((-1, Role.S1, Role.S2P, 0, True),
         (-1, Role.S1P, Role.S2, 0, True),
         (1, Role.S1, Role.S2, 1, False),
         (1, Role.S1P, Role.S2P, -1, True)),
}

_END_ORDER = (Role.S1, Role.S2, Role.S1P, Role.S2P)


def _occurrences(D: OpenDiagram, crossing):
    result = {}
    for role in _END_ORDER:
        segment = crossing.segment(role)
        result[role] = Occurrence(None if D.is_boundary(segment) else segment,
                                  D.occurrence_sigma(crossing.id, role))
    return result


def _combine(pairs, N):
    """Coefficients and constant of sum(c * occurrence) over (c, occurrence) pairs."""
    coefficients = defaultdict(complex)
    constant = 0j
    for c, occurrence in pairs:
        constant += c * occurrence.shift(N)
        if occurrence.segment is not None:
            coefficients[occurrence.segment] += c
    return {s: c for s, c in coefficients.items() if c != 0}, constant


def _argument_text(first, second, quantum, mu_coefficient, offset):
    text = '{0} - ({1})'.format(first.text(quantum), second.text(quantum))
    if quantum and mu_coefficient:
        text += ' {0} mu/N'.format('+' if mu_coefficient > 0 else '-')
    if offset:
        text += ' + 1 - 1/N' if quantum else ' + 1'
    return text


def _dilog_terms(crossing, occurrences, N, mu):
    quantum = N is not None
    kind = TermKind.QDILOG if quantum else TermKind.CDILOG
    terms = []
    for slot, (sign, a, b, mu_coefficient, offset) in enumerate(_SLOTS[crossing.sign]):
        coefficients, constant = _combine(((1, occurrences[a]), (-1, occurrences[b])), N)
        if quantum:
            constant += mu_coefficient * mu / N
            if offset:
                constant += 1.0 - 1.0 / N
        elif offset:
            constant += 1.0
        text = _argument_text(occurrences[a], occurrences[b], quantum, mu_coefficient, offset)
        arg = AffineArg(tuple(sorted((s, int(round(c.real))) for s, c in coefficients.items())),
                        complex(constant), text)
        terms.append(ActionTerm(kind, crossing.id, sign, slot, arg=arg))
    return terms


def _linear_term(crossing, occurrences, N, mu):
    e = crossing.sign
    o = occurrences
    if N is not None:
        # 2 pi i e (1 - N)(t2 - t1 - mu/N) + 2 pi i e mu (t2 + t1' - t1 - t2')
        difference, constant = _combine(((1, o[Role.S2]), (-1, o[Role.S1])), N)
        cycle, cycle_constant = _combine(((1, o[Role.S2]), (1, o[Role.S1P]),
                                          (-1, o[Role.S1]), (-1, o[Role.S2P])), N)
        a = TWO_PI_I * e * (1 - N)
        c = TWO_PI_I * e * mu
        coefficients = defaultdict(complex)
        for segment, value in difference.items():
            coefficients[segment] += a * value
        for segment, value in cycle.items():
            coefficients[segment] += c * value
        total = a * (constant - mu / N) + c * cycle_constant
    else:
        difference, constant = _combine(((1, o[Role.S2]), (-1, o[Role.S1])), None)
        coefficients = {segment: -TWO_PI_I * e * value for segment, value in difference.items()}
        total = -TWO_PI_I * e * constant
    form = LinearForm(tuple(sorted((s, complex(c)) for s, c in coefficients.items() if c != 0)),
                      complex(total))
    return ActionTerm(TermKind.LINEAR, crossing.id, 1, linear=form)


def _build(D: OpenDiagram, N: Optional[int], mu: Optional[complex], sign_convention):
    blocks, terms = [], []
    for crossing in D.crossings:
        occurrences = _occurrences(D, crossing)
        blocks.append(CrossingBlock(crossing.id, crossing.sign, crossing.weight,
                                    tuple(occurrences[role] for role in _END_ORDER)))
        terms.extend(_dilog_terms(crossing, occurrences, N, mu))
        terms.append(_linear_term(crossing, occurrences, N, mu))
    action = SymbolicAction(D, blocks, terms, mu, N, sign_convention)
    logger.debug('built %r', action)
    return action


def build_quantum_action(D: OpenDiagram, mu: complex, N: int,
                         sign_convention=SignConvention.RULE) -> SymbolicAction:
    if int(N) != N or N < 2:
        raise ValueError('level N must be an integer >= 2, got {0}'.format(N))
    return _build(D, int(N), complex(mu), sign_convention)


def build_classical_action(D: OpenDiagram, sign_convention=SignConvention.RULE) -> SymbolicAction:
    return _build(D, None, None, sign_convention)
