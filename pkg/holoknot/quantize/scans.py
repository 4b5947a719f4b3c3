"""Parameter scans and invariance checks built on the state sum."""
import cmath
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Union

import numpy as np

from holoknot.coloring.shadow import ShadowColoring, gauge, normalize
from holoknot.coloring.coloring_error import InadmissibleError
from holoknot.core.config import Tolerances
from holoknot.core.core_error import HoloKnotError, InputError
from holoknot.diagram.diagram import OpenDiagram
from holoknot.quantize.log_coloring import LogColoring
from holoknot.quantize.state_sum import state_sum
from lib.numeric import random_sl2

logger = logging.getLogger(__name__)


@dataclass
class ParabolicScan:
    N: int
    rows: list
    ratio: float
    concentrated: bool
    threshold: float = 1e-3

    def to_document(self) -> dict:
        return {'N': self.N, 'rows': self.rows, 'ratio': self.ratio,
                'concentrated': self.concentrated, 'threshold': self.threshold}


def allowed_mu(mu: int, N: int) -> bool:
    return (2 * mu + 1) % N == 0


def parabolic_vanishing_scan(D: OpenDiagram, lc: LogColoring, N: int, backend='tensor_network',
                             tolerances: Tolerances = None, threshold=1e-3) -> ParabolicScan:
    """|Z_N| for mu = 0..N-1 on a boundary-parabolic coloring.

    The mass is expected on 2 mu = -1 mod N; the ratio of the largest
    disallowed to the largest allowed |Z| is reported and only logged when
    it misses ``threshold``.
    """
    if abs(lc.m - 1) > 1e-9:
        raise InputError('the parabolic scan needs m = 1, got m = {0}'.format(lc.m))
    if N % 2 == 0:
        raise InputError('the parabolic scan needs an odd N, got {0}'.format(N))

    rows = []
    for mu in range(N):
        result = state_sum(D, lc.with_mu(mu, tolerance=1e-9), N, backend, tolerances=tolerances)
        rows.append({'mu': mu, 'allowed': allowed_mu(mu, N), 'value': result.value,
                     'abs': abs(result.value), 'error_bound': result.error_bound})

    allowed = max(row['abs'] for row in rows if row['allowed'])
    disallowed = max((row['abs'] for row in rows if not row['allowed']), default=0.0)
    ratio = disallowed / allowed if allowed > 0 else np.inf
    scan = ParabolicScan(N, rows, float(ratio), bool(ratio <= threshold), threshold)
    if not scan.concentrated:
        logger.warning('%s N=%d: disallowed mu carry %.3g of the allowed mass', D.name, N, ratio)
    return scan


@dataclass
class AsymptoticsTable:
    rows: List[dict] = field(default_factory=list)
    reference: Optional[complex] = None

    def to_document(self) -> dict:
        return {'reference': self.reference, 'rows': self.rows}

    def __len__(self):
        return len(self.rows)


def asymptotics_table(D: OpenDiagram, family: Union[LogColoring, Callable[[int], LogColoring]],
                      Ns: Iterable[int], reference: Optional[complex] = None,
                      backend='tensor_network', tolerances: Tolerances = None) -> AsymptoticsTable:
    """log Z_N / N and (log Z_N - log N / 2) / N per N, next to ``reference``
    (the Chern-Simons value of the critical point) when given.

    Rows where Z_N cannot be computed are kept and marked skipped.
    """
    table = AsymptoticsTable(reference=reference)
    for N in Ns:
        try:
            lc = family(N) if callable(family) else family
            value = state_sum(D, lc, N, backend, tolerances=tolerances).value
            if value == 0:
                raise InputError('Z_{0} vanishes'.format(N))
        except HoloKnotError as error:
            logger.warning('%s: N=%d skipped: %s', D.name, N, error)
            table.rows.append({'N': N, 'skipped': True, 'reason': str(error)})
            continue
        log_value = cmath.log(value)
        row = {'N': N, 'skipped': False, 'value': value, 'log_over_N': log_value / N,
               'log_over_N_reduced': (log_value - 0.5 * np.log(N)) / N}
        if reference is not None:
            row['reference_real'] = complex(reference).real
            row['difference_real'] = (log_value / N).real - complex(reference).real
        table.rows.append(row)
    return table


def gauge_invariance(D: OpenDiagram, shadow: ShadowColoring, N: int, rng: np.random.Generator,
                     gauges=3, kind='B', backend='tensor_network', tolerances: Tolerances = None,
                     mu: Optional[complex] = None) -> dict:
    """Z_N of ``shadow`` and of ``gauges`` random gauge transforms of it.

    Transforms that make the parameters inadmissible are redrawn.
    """
    tolerances = tolerances or Tolerances()
    base = LogColoring.from_shadow(normalize(shadow, tolerances.residual), mu, tolerances.residual)
    reference = state_sum(D, base, N, backend, tolerances=tolerances).value
    values = []
    attempts = 0
    while len(values) < gauges:
        attempts += 1
        if attempts > 20 * gauges:
            raise InadmissibleError('no admissible gauge after {0} attempts'.format(attempts))
        try:
            gauged = gauge(shadow, kind, random_sl2(rng, 0.5), tolerances.residual)
            lc = LogColoring.from_shadow(normalize(gauged, tolerances.residual), mu, tolerances.residual)
        except InadmissibleError:
            continue
        values.append(state_sum(D, lc, N, backend, tolerances=tolerances).value)
    spread = max(abs(value - reference) for value in values) / abs(reference)
    logger.info('%s N=%d: gauge spread %.3g over %d gauges', D.name, N, spread, gauges)
    return {'reference': reference, 'values': values, 'spread': float(spread)}


def log_shift_invariance(D: OpenDiagram, lc: LogColoring, N: int, shifts, backend='tensor_network',
                         tolerances: Tolerances = None) -> dict:
    """Z_N after moving single logarithms by integers; ``shifts`` are (segment, j) pairs."""
    reference = state_sum(D, lc, N, backend, tolerances=tolerances).value
    values = [state_sum(D, lc.shifted(segment, j), N, backend, tolerances=tolerances).value
              for segment, j in shifts]
    spread = max((abs(value - reference) for value in values), default=0.0) / abs(reference)
    return {'reference': reference, 'values': values, 'spread': float(spread)}
