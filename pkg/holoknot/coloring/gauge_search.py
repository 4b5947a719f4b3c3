import logging
from dataclasses import dataclass

import numpy as np

from holoknot.coloring.coloring_error import InadmissibleError, ShadowClosureError
from holoknot.coloring.shadow import (ShadowColoring, ParameterSet, UnitCircleReport,
                                      avoids_unit_circle, gauge, normalize, parameters)
from holoknot.core.config import Tolerances, SolverSettings
from holoknot.geometry.geometry_error import DegenerateShapeError
from holoknot.geometry.shapes import shape_parameters
from lib.numeric import random_sl2

logger = logging.getLogger(__name__)


def _random_gauge(shadow: ShadowColoring, rng: np.random.Generator, tolerance) -> ShadowColoring:
    moved = gauge(shadow, 'A', random_sl2(rng, scale=1.0), tolerance)
    return gauge(moved, 'B', random_sl2(rng, scale=1.0), tolerance)


@dataclass
class GaugeSearchResult:
    shadow: ShadowColoring
    parameters: ParameterSet
    report: UnitCircleReport
    trials: int


def unit_circle_gauge_search(shadow: ShadowColoring, rng: np.random.Generator,
                             trials=SolverSettings.gauge_trials.default,
                             margin=Tolerances.unit_circle_margin.default,
                             tolerance=Tolerances.residual.default) -> GaugeSearchResult:
    """Random gauges until every shape keeps ``margin`` off the unit circle.

    Trial 0 is ``shadow`` itself. Later trials apply a random type A gauge
    followed by a random type B gauge: type B alone never moves an
    eigenline, so it cannot repair a b that vanishes because v_i lies on
    the first coordinate axis.

    The best normalized admissible candidate is returned when no trial
    reaches the margin; its report says so.
    """
    D = shadow.diagram
    best = None
    for trial in range(trials + 1):
        try:
            candidate = shadow if trial == 0 else _random_gauge(shadow, rng, tolerance)
            candidate = normalize(candidate, tolerance)
            candidate_parameters = parameters(candidate, tolerance)
            if not candidate_parameters.admissible:
                continue
            report = avoids_unit_circle(shape_parameters(candidate_parameters, shadow.m, D), margin)
        except (InadmissibleError, ShadowClosureError, DegenerateShapeError):
            continue
        if best is None or report.margin > best.report.margin:
            best = GaugeSearchResult(candidate, candidate_parameters, report, trial)
        if report.avoids:
            break

    if best is None:
        raise InadmissibleError('no admissible gauge found for {0} in {1} trials'.format(
            D.name, trials))
    logger.info('%s: unit circle margin %.3g after %d gauge trials', D.name,
                best.report.margin, best.trials)
    return best
