"""Command pipelines behind the command line.

Every command is a method ``_run_<command>`` that fills a :class:`Report`;
stages inside a command emit ``pre_stage``/``post_stage``/``error_stage``.
"""
import json
import logging
import os
import time
from contextlib import contextmanager

import mpmath
import numpy as np

from holoknot.action.builder import build_classical_action, build_quantum_action
from holoknot.cli.cli_error import UnknownCommandError
from holoknot.cli.fixtures import builtin_representation, emit_builtin_fixtures
from holoknot.cli.report import Report
from holoknot.coloring.gauge_search import unit_circle_gauge_search
from holoknot.coloring.representation import load_representation
from holoknot.coloring.segment_coloring import is_pinched
from holoknot.coloring.shadow import avoids_unit_circle, normalize, parameters, propagate_shadow
from holoknot.core.config import RunConfig
from holoknot.core.core_error import InputError
from holoknot.core.signals import Signal
from holoknot.diagram.builtin import BUILTIN_NAMES, builtin
from holoknot.diagram.diagram import parse_diagram
from holoknot.dilog.checks import run_checks
from holoknot.geometry.critical import critical_summary, find_critical_point
from holoknot.geometry.shapes import shape_parameters
from holoknot.geometry.solver import MultistartSolver
from holoknot.quantize.log_coloring import log_coloring_from_representation
from holoknot.quantize.poles import pole_distance
from holoknot.quantize.scans import asymptotics_table, parabolic_vanishing_scan
from holoknot.quantize.state_integral import StateIntegrator
from holoknot.quantize.state_sum import state_sum
from holoknot.quantize.theorem import fourier_verify_1d, theorem_partial_sum

logger = logging.getLogger(__name__)

COMMANDS = ('diagram-validate', 'diagram-regions', 'color', 'dilog-check', 'action-show', 'solve',
            'critical', 'statesum', 'stateintegral', 'verify-theorem', 'scan-parabolic',
            'asymptotics', 'fixtures')

# brute force cross-check of the contraction up to this many terms
CROSS_CHECK_TERMS = 3 ** 7

THEOREM_ERROR = 5e-2


def known_volume(name):
    """Hyperbolic volume oracles computed independently with mpmath."""
    if name == 'figure8':
        return float(2 * mpmath.clsin(2, mpmath.pi / 3))
    return None


def load_diagram(source):
    """A builtin diagram name or the path of a diagram document."""
    if source in BUILTIN_NAMES and not os.path.exists(source):
        return builtin(source)
    try:
        with open(source, 'r', encoding='utf-8') as file:
            document = json.load(file)
    except OSError as error:
        raise InputError('cannot read diagram {0}: {1}'.format(source, error))
    except ValueError as error:
        raise InputError('diagram {0} is not valid JSON: {1}'.format(source, error))
    return parse_diagram(document)


def load_representation_source(source, D, tolerance):
    if source in ('', 'builtin'):
        return builtin_representation(D)
    try:
        with open(source, 'r', encoding='utf-8') as file:
            document = json.load(file)
    except OSError as error:
        raise InputError('cannot read representation {0}: {1}'.format(source, error))
    except ValueError as error:
        raise InputError('representation {0} is not valid JSON: {1}'.format(source, error))
    return load_representation(document, D, tolerance)


def _split_timing(diagnostics):
    diagnostics = dict(diagnostics)
    return diagnostics, diagnostics.pop('elapsed', None)


class Pipeline:

    def __init__(self, config: RunConfig):
        self.config = config
        self.tolerances = config.tolerance_set
        self.quadrature = config.quadrature_settings
        self.solver = config.solver_settings
        self.rng = np.random.default_rng(config.seed)
        self.report = None

        self.pre_stage = Signal()
        """Slot signature: slot(command, stage)"""
        self.post_stage = Signal()
        """Slot signature: slot(command, stage, seconds)"""
        self.error_stage = Signal()
        """Slot signature: slot(command, stage, error)"""

    @contextmanager
    def stage(self, name):
        command = self.config.command
        self.pre_stage.emit(command, name)
        started = time.perf_counter()
        try:
            yield
        except Exception as error:
            self.error_stage.emit(command, name, error)
            raise
        elapsed = time.perf_counter() - started
        self.report.add_timing(name, elapsed)
        self.post_stage.emit(command, name, elapsed)

    def run(self) -> Report:
        command = self.config.command.replace(' ', '-')
        if command not in COMMANDS:
            raise UnknownCommandError('unknown command {0!r}, expected one of {1}'.format(
                command, ', '.join(COMMANDS)))
        self.report = Report(command, self.config.create_memento(), self.config.timing)
        getattr(self, '_run_' + command.replace('-', '_'))()
        logger.info('%s: %s', command, 'passed' if self.report.passed else 'failed')
        return self.report

    # shared stages

    def _diagram(self):
        with self.stage('diagram'):
            return load_diagram(self.config.diagram)

    def _log_coloring(self, D):
        with self.stage('coloring'):
            representation = load_representation_source(self.config.representation, D,
                                                         self.tolerances.residual)
            lc, search = log_coloring_from_representation(D, representation, self.rng,
                                                          tolerances=self.tolerances,
                                                          settings=self.solver)
            if self.config.mu_value is not None:
                lc = lc.with_mu(self.config.mu_value, tolerance=self.tolerances.residual)
        self.report.add_result('coloring', m=lc.m, mu=lc.mu, beta=lc.beta,
                               unit_circle_margin=search.report.margin,
                               avoids_unit_circle=search.report.avoids, gauge_trials=search.trials)
        return lc, search

    # commands

    def _run_diagram_validate(self):
        D = self._diagram()
        self.report.add_result('diagram', diagram=D.name, crossings=D.cr, segments=len(D.E),
                               regions=len(D.regions()), turnbacks=len(D.turnbacks))
        self.report.add_check('segment_count', len(D.E) == 2 * D.cr - 1, len(D.E), 2 * D.cr - 1)

    def _run_diagram_regions(self):
        D = self._diagram()
        self.report.add_result('regions', regions=[
            {'id': region.id, 'darts': [[crossing, role.value] for crossing, role in region.darts],
             'above_of': list(region.above_of), 'below_of': list(region.below_of)}
            for region in D.regions()])

    def _run_color(self):
        D = self._diagram()
        with self.stage('coloring'):
            representation = load_representation_source(self.config.representation, D,
                                                        self.tolerances.residual)
            pinch = is_pinched(D, representation.coloring, self.tolerances.projective)
            shadow = propagate_shadow(D, representation.coloring, representation.u0,
                                      representation.base_region, self.tolerances.residual)
            if self.config.gauge_search:
                shadow = unit_circle_gauge_search(shadow, self.rng, self.solver.gauge_trials,
                                                  self.tolerances.unit_circle_margin,
                                                  self.tolerances.residual).shadow
            elif self.config.normalize:
                shadow = normalize(shadow, self.tolerances.residual)
            parameter_set = parameters(shadow, self.tolerances.residual)
        result = self.report.add_result('parameters', a=parameter_set.a, b=parameter_set.b,
                                        admissible=parameter_set.admissible,
                                        normalized=parameter_set.normalized,
                                        inadmissible=list(parameter_set.inadmissible),
                                        pinched=list(pinch.pinched), m=representation.m)
        if parameter_set.admissible:
            circle = avoids_unit_circle(shape_parameters(parameter_set, representation.m, D),
                                        self.tolerances.unit_circle_margin)
            result['unit_circle'] = {'avoids': circle.avoids, 'margin': circle.margin,
                                     'worst': list(circle.worst)}
        self.report.add_check('admissible', parameter_set.admissible)

    def _run_dilog_check(self):
        with self.stage('dilog'):
            results = run_checks(self.config.N, self.config.seed, self.tolerances)
        self.report.add_result('dilog', N=self.config.N, checks=[r.to_document() for r in results])
        for result in results:
            self.report.add_check(result.name, result.passed, result.error, result.threshold,
                                  result.informational)

    def _run_action_show(self):
        D = self._diagram()
        if self.config.classical:
            action = build_classical_action(D)
        else:
            action = build_quantum_action(D, self.config.mu_value or 0j, self.config.N)
        self.report.add_result('action', text=action.text(), terms=action.term_lines())

    def _run_solve(self):
        D = self._diagram()
        m = self.config.m_value if self.config.m_value is not None else 1.0
        solver = MultistartSolver(D, m, self.solver, self.tolerances, self.config.pins or None)
        with self.stage('solve'):
            model = solver.run(self.rng)
        self.report.add_result('solutions', m=m, pins=list(solver.pins), solutions=[
            {'b': result.b, 'residual': result.residual, 'iterations': result.iterations,
             'method': result.method, 'seed_index': result.seed_index} for result in model])
        self.report.add_check('found_solution', len(model) > 0, len(model))
        if len(model):
            best = model.best().residual
            self.report.add_check('residual', best <= self.tolerances.newton_residual, best,
                                  self.tolerances.newton_residual)

    def _run_critical(self):
        D = self._diagram()
        with self.stage('critical'):
            point = find_critical_point(D, rng=self.rng, settings=self.solver, tolerances=self.tolerances)
        oracle = known_volume(D.name)
        summary = critical_summary(D, point, oracle)
        diagnostics, _ = _split_timing(summary.pop('diagnostics'))
        residual = diagnostics.get('residual')
        summary['action_value'] = summary.pop('value')
        self.report.add_result('critical', summary.pop('reduced_value'), residual, diagnostics, **summary)
        self.report.add_check('residual', residual <= self.tolerances.newton_residual,
                              residual, self.tolerances.newton_residual)
        self.report.add_check('flattening', point.flattening_defect <= self.tolerances.flattening_defect,
                              point.flattening_defect, self.tolerances.flattening_defect)
        if oracle is not None:
            self.report.add_check('volume', abs(summary['volume'] - oracle) <= 1e-6,
                                  summary['volume'], oracle)

    def _run_statesum(self):
        D = self._diagram()
        lc, _ = self._log_coloring(D)
        N = self.config.N
        with self.stage('statesum'):
            result = state_sum(D, lc, N, self.config.backend, tolerances=self.tolerances)
        diagnostics, _ = _split_timing(result.diagnostics)
        diagnostics.update({'terms': result.terms, 'strategy': result.strategy,
                            'pole_distance': pole_distance(D, lc, N)['lattice']})
        self.report.add_result('statesum', result.value, result.error_bound, diagnostics, N=N)
        if result.terms <= CROSS_CHECK_TERMS:
            other = 'brute_force' if self.config.backend == 'tensor_network' else 'tensor_network'
            with self.stage('cross-check'):
                check = state_sum(D, lc, N, other, tolerances=self.tolerances)
            difference = abs(check.value - result.value) / max(abs(result.value), 1e-300)
            self.report.add_check('backend_agreement', difference <= 1e-9, difference, 1e-9)

    def _integrator(self, D, lc):
        with self.stage('tables'):
            return StateIntegrator(D, lc, self.config.N, self.quadrature, self.tolerances,
                                   threads=self.config.threads)

    def _run_stateintegral(self):
        D = self._diagram()
        lc, _ = self._log_coloring(D)
        k = self.config.k_vector or [0] * len(D.E)
        if len(k) != len(D.E):
            raise InputError('k needs {0} components, got {1}'.format(len(D.E), len(k)))
        integrator = self._integrator(D, lc)
        with self.stage('stateintegral'):
            result = integrator.integrate(k, self.config.nodes or None, self.rng)
        diagnostics, _ = _split_timing(result.diagnostics)
        self.report.add_result('stateintegral', result.value, result.error_estimate, diagnostics,
                               k=k, nodes=result.nodes, N=self.config.N)

    def _run_verify_theorem(self):
        D = self._diagram()
        lc, _ = self._log_coloring(D)
        N = self.config.N
        integrator = self._integrator(D, lc)
        with self.stage('theorem'):
            report = theorem_partial_sum(D, lc, N, self.config.K, self.quadrature, self.tolerances,
                                         self.rng, self.config.nodes or None, integrator)
        final = report.cesaro[-1]
        self.report.add_result('theorem', final, report.quadrature_errors[-1] * abs(report.state_sum.value),
                               report.to_document())
        self.report.add_check('decreasing', report.decreasing, report.cesaro_errors)
        self.report.add_check('final_error', report.final_error < THEOREM_ERROR, report.final_error,
                              THEOREM_ERROR)
        self.report.add_check('k0_gap', report.gap > 0, report.gap, informational=True)

        if self.config.fourier_K:
            with self.stage('fourier'):
                fourier = fourier_verify_1d(D, lc, N, D.E[0], np.zeros(len(D.E), dtype=int),
                                            self.config.fourier_K, settings=self.quadrature,
                                            tolerances=self.tolerances)
            error = fourier.cesaro_errors[fourier.orders[-1]]
            self.report.add_result('fourier', diagnostics=fourier.to_document())
            self.report.add_check('fourier_decreasing', fourier.decreasing,
                                  [fourier.cesaro_errors[order] for order in fourier.orders])
            self.report.add_check('fourier_error', error < 1e-2, error, 1e-2)

    def _run_scan_parabolic(self):
        D = self._diagram()
        lc, _ = self._log_coloring(D)
        with self.stage('scan'):
            scan = parabolic_vanishing_scan(D, lc, self.config.N, self.config.backend, self.tolerances)
        self.report.add_result('scan', **scan.to_document())
        # exploratory: a missed concentration is reported, not failed
        self.report.add_check('concentrated', scan.concentrated, scan.ratio, scan.threshold,
                              informational=True)

    def _run_asymptotics(self):
        D = self._diagram()
        lc, _ = self._log_coloring(D)
        reference = None
        if abs(lc.m - 1) <= self.tolerances.residual:
            with self.stage('critical'):
                reference = find_critical_point(D, rng=self.rng, settings=self.solver,
                                                tolerances=self.tolerances).reduced_value
        with self.stage('asymptotics'):
            table = asymptotics_table(D, lc, self.config.Ns, reference, self.config.backend,
                                      self.tolerances)
        self.report.add_result('asymptotics', **table.to_document())

    def _run_fixtures(self):
        with self.stage('fixtures'):
            paths = emit_builtin_fixtures(self.config.fixtures_dir)
        self.report.add_result('fixtures', paths=paths)


def run(config: RunConfig) -> Report:
    """Run the command named by ``config`` and return its report."""
    return Pipeline(config).run()
