"""Symbolic actions: crossing blocks and the dilogarithm and linear terms they expand to.

Arguments of dilogarithm terms are affine in the segment variables with
integer coefficients; every numeric constant (turnback shifts, mu / N,
1 - 1/N offsets) is folded into ``constant``. ``text`` carries the same
argument written symbolically and only serves the canonical printout.
"""
import enum
from dataclasses import dataclass, field
from collections.abc import Mapping
from typing import Dict, Optional, Tuple

import numpy as np

from holoknot.diagram.diagram import OpenDiagram, SegmentId
from holoknot.dilog.qdilog import QDilogContext


class TermKind(enum.Enum):
    QDILOG = 'qdilog'
    CDILOG = 'cdilog'
    LINEAR = 'linear'


class SignConvention(enum.Enum):
    RULE = 'rule'
    PRINTED = 'printed'


@dataclass(frozen=True)
class Occurrence:
    """A segment variable as it enters one crossing end, boundary segments as None."""
    segment: Optional[SegmentId]
    sigma: int = 0

    def shift(self, N: Optional[int]) -> float:
        if N is None:
            return float(self.sigma)
        return self.sigma * (1.0 - 1.0 / N)

    def text(self, quantum: bool) -> str:
        if self.segment is None:
            return '0'
        if self.sigma == 0:
            return self.segment
        if quantum:
            if self.sigma == 1:
                return '{0} + 1 - 1/N'.format(self.segment)
            if self.sigma == -1:
                return '{0} + 1/N - 1'.format(self.segment)
            return '{0} + {1}(1 - 1/N)'.format(self.segment, self.sigma)
        return '{0} {1} {2}'.format(self.segment, '+' if self.sigma > 0 else '-', abs(self.sigma))


@dataclass(frozen=True)
class AffineArg:
    coefficients: Tuple[Tuple[SegmentId, int], ...]
    constant: complex = 0j
    text: str = field(default='', compare=False)

    def evaluate(self, values: Mapping):
        """Argument at ``values`` (segment -> scalar or array, broadcast together)."""
        result = self.constant
        for segment, coefficient in self.coefficients:
            result = result + coefficient * values[segment]
        return result

    def coefficient(self, segment: SegmentId) -> int:
        return dict(self.coefficients).get(segment, 0)


@dataclass(frozen=True)
class LinearForm:
    coefficients: Tuple[Tuple[SegmentId, complex], ...]
    constant: complex = 0j

    def evaluate(self, values: Mapping):
        result = self.constant
        for segment, coefficient in self.coefficients:
            result = result + coefficient * values[segment]
        return result

    def coefficient(self, segment: SegmentId) -> complex:
        return dict(self.coefficients).get(segment, 0j)


@dataclass(frozen=True)
class ActionTerm:
    kind: TermKind
    crossing: str
    sign: int = 1
    slot: int = -1
    arg: Optional[AffineArg] = None
    linear: Optional[LinearForm] = None

    @property
    def is_dilog(self) -> bool:
        return self.kind is not TermKind.LINEAR

    def label(self) -> str:
        if self.kind is TermKind.LINEAR:
            return '{0}.linear'.format(self.crossing)
        return '{0}.{1}'.format(self.crossing, self.slot)

    def text(self) -> str:
        if self.kind is TermKind.LINEAR:
            parts = ['({0:.12g})*{1}'.format(c, s) for s, c in self.linear.coefficients]
            parts.append('({0:.12g})'.format(self.linear.constant))
            return ' + '.join(parts)
        name = 'phi' if self.kind is TermKind.QDILOG else 'l'
        return '{0}{1}({2})'.format('+' if self.sign > 0 else '-', name, self.arg.text)


@dataclass(frozen=True)
class CrossingBlock:
    """One crossing function with the four occurrences (1, 2, 1', 2') it is applied to."""
    crossing: str
    sign: int
    weight: int
    occurrences: Tuple[Occurrence, Occurrence, Occurrence, Occurrence]

    def text(self, quantum: bool) -> str:
        name = ('L' if quantum else 'l') + ('+' if self.sign > 0 else '-')
        return '{0}({1})'.format(name, ', '.join(o.text(quantum) for o in self.occurrences))


class SymbolicAction:
    """The quantum action A_{D,mu} at level N, or the classical action V when N is None.

    exp(N A) is the product over crossings of exp(weight * crossing function);
    ``weight`` is +1 everywhere unless the printed sign convention is chosen.
    """

    def __init__(self, diagram: OpenDiagram, blocks, terms, mu: Optional[complex] = None,
                 N: Optional[int] = None, sign_convention=SignConvention.RULE):
        self.diagram = diagram
        self.blocks = tuple(blocks)
        self.terms = tuple(terms)
        self.mu = None if mu is None else complex(mu)
        self.N = N
        self.sign_convention = SignConvention(sign_convention)
        self._weights = {block.crossing: (block.weight if self.sign_convention is SignConvention.PRINTED
                                          else 1) for block in self.blocks}
        self._context = None

    @property
    def quantum(self) -> bool:
        return self.N is not None

    @property
    def variables(self) -> Tuple[SegmentId, ...]:
        return self.diagram.E

    @property
    def scale(self) -> float:
        return 1.0 / self.N if self.quantum else 1.0

    def weight(self, crossing_id: str) -> int:
        return self._weights[crossing_id]

    @property
    def dilog_terms(self):
        return [term for term in self.terms if term.is_dilog]

    @property
    def linear_terms(self):
        return [term for term in self.terms if not term.is_dilog]

    def crossing_terms(self, crossing_id: str):
        return [term for term in self.terms if term.crossing == crossing_id]

    def context(self):
        """Shared level N evaluator of e^phi_N, created on first use."""
        if self._context is None:
            self._context = QDilogContext(self.N)
        return self._context

    def set_context(self, context):
        if context.N != self.N:
            raise ValueError('context level {0} does not match N = {1}'.format(context.N, self.N))
        self._context = context

    def values(self, t) -> Dict[SegmentId, complex]:
        """Segment values from a mapping or from a vector ordered like ``variables``."""
        if isinstance(t, Mapping):
            return {segment: t[segment] for segment in self.variables}
        t = np.asarray(t)
        if t.shape[-1] != len(self.variables):
            raise ValueError('expected {0} segment values, got {1}'.format(
                len(self.variables), t.shape[-1]))
        return {segment: t[..., i] for i, segment in enumerate(self.variables)}

    def text(self) -> str:
        """Canonical one line form, crossing blocks in diagram order."""
        parts = []
        for block in self.blocks:
            sign = self.weight(block.crossing)
            body = block.text(self.quantum)
            if not parts:
                parts.append(body if sign > 0 else '- ' + body)
            else:
                parts.append(('+ ' if sign > 0 else '- ') + body)
        inner = ' '.join(parts)
        return '(1/N) [ {0} ]'.format(inner) if self.quantum else '[ {0} ]'.format(inner)

    def term_lines(self):
        return ['{0}: {1}'.format(term.label(), term.text()) for term in self.terms]

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        kind = 'quantum N={0}'.format(self.N) if self.quantum else 'classical'
        return 'SymbolicAction({0}, {1}, {2} terms)'.format(self.diagram.name, kind, len(self.terms))
